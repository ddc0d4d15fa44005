#pragma once

// lzpen command line: generate, sweep, bench, compress, trace.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage error (unknown flag,
// bad value, invalid combination), 3 unreadable file, 4 malformed input or
// config file.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "lzpenalty/lzpenalty.hpp"

namespace lzpenalty::cli {

enum ExitCode : int {
    ok = 0,
    runtime_failure = 1,
    usage_error = 2,
    io_error = 3,
    format_error = 4,
};

namespace detail {

inline const std::map<std::string, TokenFormat> token_formats{{"bytes", TokenFormat::bytes},
                                                              {"ints", TokenFormat::ints}};
inline const std::map<std::string, ExtensionSemantics> extension_names{
    {"any", ExtensionSemantics::any_occurrence}, {"canonical", ExtensionSemantics::canonical_only}};
inline const std::map<std::string, MatcherKind> matcher_names{{"naive", MatcherKind::naive},
                                                              {"indexed", MatcherKind::indexed}};
inline const std::map<std::string, PenaltyKind> penalty_names{{"none", PenaltyKind::none},
                                                             {"lz", PenaltyKind::lz},
                                                             {"frequency", PenaltyKind::frequency},
                                                             {"repetition", PenaltyKind::repetition}};

inline void write_output(const std::string& data, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << data;
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot write output file '" + path + "'");
    f << data;
}

inline std::string join_tokens(TokenSpan tokens) {
    std::string s;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) s += ' ';
        s += std::to_string(tokens[i]);
    }
    return s;
}

inline PenaltySetting parse_penalty_setting(const std::string& item) {
    const auto colon = item.find(':');
    const auto kind = parse_penalty_kind(item.substr(0, colon));
    if (!kind) throw UsageError("unknown penalty '" + item.substr(0, colon) + "' in grid");
    PenaltySetting s{*kind, 0.0};
    if (colon != std::string::npos) s.strength = lzpenalty::detail::parse_double(item.substr(colon + 1), "grid strength");
    else if (*kind == PenaltyKind::lz) s.strength = 0.15;
    else if (*kind == PenaltyKind::repetition) s.strength = 1.0;
    return s;
}

struct LzFlags {
    double alpha = 0.15;
    std::size_t window = 512;
    std::size_t buffer = 32;
    ExtensionSemantics extension = ExtensionSemantics::any_occurrence;
    MatcherKind matcher = MatcherKind::naive;

    void add_to(CLI::App& app, bool with_alpha) {
        if (with_alpha) app.add_option("--alpha", alpha, "LZ penalty strength")->capture_default_str();
        app.add_option("--window", window, "lookback window capacity (tokens)")->capture_default_str();
        app.add_option("--buffer", buffer, "buffer capacity (tokens)")->capture_default_str();
        app.add_option("--extension", extension, "match extension semantics")
            ->transform(CLI::CheckedTransformer(extension_names, CLI::ignore_case));
        app.add_option("--matcher", matcher, "matcher implementation")
            ->transform(CLI::CheckedTransformer(matcher_names, CLI::ignore_case));
    }

    LzPenaltyConfig config() const {
        LzPenaltyConfig c{alpha, window, buffer, extension, matcher};
        c.validate();
        return c;
    }
};

struct TokenInput {
    std::string path;
    TokenFormat format = TokenFormat::bytes;
    std::size_t vocab = 256;

    void add_to(CLI::App& app, const std::string& flag, bool required) {
        auto* o = app.add_option(flag, path, "token file");
        if (required) o->required();
        app.add_option("--format", format, "token file format: bytes or ints (newline-separated)")
            ->transform(CLI::CheckedTransformer(token_formats, CLI::ignore_case));
        app.add_option("--vocab", vocab, "vocabulary size (bytes imply 256)")->capture_default_str();
    }

    TokenVec read() const {
        const TokenVec t = read_token_file(path, format);
        if (format == TokenFormat::bytes && vocab != 256) throw UsageError("--format bytes requires --vocab 256");
        check_vocab(t, vocab);
        return t;
    }
};

} // namespace detail

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    using namespace detail;
    CLI::App app{"LZ penalty toolkit: sampling with simulated LZSS codelength penalties"};
    app.name("lzpen");
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; command-line flags take precedence");

    // generate
    auto* gen = app.add_subcommand("generate", "sample from a toy model with the configured penalty");
    std::string model_spec;
    TokenInput prompt_in;
    double temperature = 1.0;
    std::size_t top_k = 40;
    double top_p = 0.95;
    PenaltyKind penalty = PenaltyKind::none;
    std::optional<double> strength;
    LzFlags lz;
    std::uint64_t seed = 0;
    std::size_t max_tokens = 256;
    std::string output = "text";
    std::optional<Token> end_token;
    gen->add_option("--model", model_spec, "ngram:<order>:<corpus> or loop:<p>[:<vocab>]")->required();
    gen->add_option("--prompt-file", prompt_in.path, "prompt token file");
    gen->add_option("--prompt-format", prompt_in.format, "prompt format: bytes or ints")
        ->transform(CLI::CheckedTransformer(token_formats, CLI::ignore_case));
    gen->add_option("--temperature", temperature, "0 = greedy")->capture_default_str();
    gen->add_option("--top-k", top_k, "0 = unlimited")->capture_default_str();
    gen->add_option("--top-p", top_p)->capture_default_str();
    gen->add_option("--penalty", penalty, "none, lz, frequency or repetition")
        ->transform(CLI::CheckedTransformer(penalty_names, CLI::ignore_case));
    auto* strength_opt = gen->add_option("--strength", strength, "penalty strength (alpha for lz)");
    lz.add_to(*gen, true);
    gen->add_option("--seed", seed)->capture_default_str();
    gen->add_option("--max-tokens", max_tokens)->capture_default_str();
    gen->add_option("--end-token", end_token, "stop after emitting this token");
    gen->add_option("--output", output, "text or json")->check(CLI::IsMember({"text", "json"}));

    // sweep
    auto* sweep = app.add_subcommand("sweep", "grid of penalty x strength x temperature, CSV out");
    std::string sweep_model;
    std::vector<std::string> grid_items;
    std::string preset;
    std::vector<double> temperatures{0.0};
    std::size_t seed_count = 10;
    std::uint64_t seed_base = 1;
    std::size_t sweep_max_tokens = 500;
    std::size_t sweep_top_k = 40;
    double sweep_top_p = 0.95;
    LzFlags sweep_lz;
    std::size_t prompt_length = 4;
    std::size_t threshold = 20;
    unsigned threads = 0;
    std::string sweep_out;
    sweep->add_option("--model", sweep_model)->required();
    sweep->add_option("--grid", grid_items, "penalty[:strength] items, e.g. none lz:0.15 frequency:0.3")
        ->delimiter(',');
    sweep->add_option("--preset", preset, "frequency or repetition reference strengths (plus an LZ row)")
        ->check(CLI::IsMember({"frequency", "repetition"}));
    sweep->add_option("--temperatures", temperatures)->delimiter(',')->capture_default_str();
    sweep->add_option("--seeds", seed_count, "runs per cell")->capture_default_str();
    sweep->add_option("--seed-base", seed_base)->capture_default_str();
    sweep->add_option("--max-tokens", sweep_max_tokens)->capture_default_str();
    sweep->add_option("--top-k", sweep_top_k)->capture_default_str();
    sweep->add_option("--top-p", sweep_top_p)->capture_default_str();
    sweep_lz.add_to(*sweep, false);
    sweep->add_option("--prompt-length", prompt_length)->capture_default_str();
    sweep->add_option("--threshold", threshold, "detector repeat threshold")->capture_default_str();
    sweep->add_option("--threads", threads, "0 = hardware concurrency");
    sweep->add_option("--out", sweep_out, "CSV path (default stdout)");

    // bench
    auto* bench = app.add_subcommand("bench", "per-step LZ penalty latency microbenchmark, CSV out");
    BenchOptions bench_opt;
    std::string bench_out;
    bench->add_option("--vocab", bench_opt.vocab_sizes)->delimiter(',')->capture_default_str();
    bench->add_option("--window", bench_opt.windows)->delimiter(',')->capture_default_str();
    bench->add_option("--buffer", bench_opt.buffer)->capture_default_str();
    bench->add_option("--iterations", bench_opt.iterations)->capture_default_str();
    bench->add_option("--alpha", bench_opt.alpha, "0 measures the skipped-penalty fast path")->capture_default_str();
    bench->add_option("--matcher", bench_opt.matcher)
        ->transform(CLI::CheckedTransformer(matcher_names, CLI::ignore_case));
    bench->add_option("--seed", bench_opt.seed)->capture_default_str();
    bench->add_option("--out", bench_out, "CSV path (default stdout)");

    // compress
    auto* compress = app.add_subcommand("compress", "greedy LZSS encode with exact bit accounting");
    TokenInput compress_in;
    std::size_t c_window = 512;
    std::size_t c_buffer = 32;
    bool emit_blocks = false;
    compress_in.add_to(*compress, "--input", true);
    compress->add_option("--window", c_window)->capture_default_str();
    compress->add_option("--buffer", c_buffer)->capture_default_str();
    compress->add_flag("--emit-blocks", emit_blocks, "print one code block per line before the summary");

    // trace
    auto* trace = app.add_subcommand("trace", "per-step match state and penalty extremes for a token file");
    TokenInput trace_in;
    LzFlags trace_lz;
    std::size_t top_n = 5;
    trace_in.add_to(*trace, "--input", true);
    trace_lz.add_to(*trace, false);
    trace->add_option("--top", top_n, "entries listed per extreme")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ConfigError& e) {
        err << "lzpen: malformed config: " << e.what() << '\n';
        return format_error;
    } catch (const CLI::FileError& e) {
        err << "lzpen: " << e.what() << '\n';
        return io_error;
    } catch (const CLI::ParseError& e) {
        err << "lzpen: " << e.what() << '\n';
        return usage_error;
    }

    try {
        if (gen->parsed()) {
            LzPenaltyConfig lzc = lz.config();
            const bool alpha_given = gen->count("--alpha") > 0;
            if (penalty == PenaltyKind::lz) {
                if (strength) {
                    if (alpha_given && *strength != lz.alpha)
                        throw UsageError("--alpha and --strength disagree for --penalty lz");
                    lzc.alpha = *strength;
                }
            } else if (alpha_given) {
                throw UsageError("--alpha only applies to --penalty lz");
            }
            if ((penalty == PenaltyKind::frequency || penalty == PenaltyKind::repetition) && !strength)
                throw UsageError("--penalty " + std::string(penalty_name(penalty)) + " requires --strength");
            if (penalty == PenaltyKind::none && strength) throw UsageError("--strength given without --penalty");
            (void)strength_opt;

            const AnyModel model = parse_model_spec(model_spec);
            TokenVec prompt;
            if (!prompt_in.path.empty()) {
                prompt = read_token_file(prompt_in.path, prompt_in.format);
                check_vocab(prompt, model.vocab_size());
            }
            SamplerConfig cfg;
            cfg.temperature = temperature;
            cfg.top_k = top_k;
            cfg.top_p = top_p;
            cfg.penalty = penalty;
            cfg.strength = strength.value_or(0.0);
            cfg.lz = lzc;
            cfg.seed = seed;
            cfg.max_tokens = max_tokens;
            cfg.end_token = end_token;
            const GenerationResult res = generate(model, cfg, prompt);
            const RepetitionVerdict verdict = detect_degenerate(res.tokens);
            const double xent = xent_under_model(model, res.tokens, prompt);
            if (output == "json") {
                nlohmann::json j;
                j["model"] = model_spec;
                j["penalty"] = std::string(penalty_name(penalty));
                j["tokens"] = res.tokens;
                j["degenerate"] = verdict.degenerate;
                j["period"] = verdict.period();
                j["repeat_count"] = verdict.repeat_count;
                j["start_index"] = verdict.start_index;
                j["xent_bits"] = xent;
                j["stopped_at_end_token"] = res.stopped_at_end_token;
                out << j.dump() << '\n';
            } else {
                if (model.is_ngram()) out << std::string(res.tokens.begin(), res.tokens.end()) << '\n';
                else out << join_tokens(res.tokens) << '\n';
                out << fmt::format("tokens={} degenerate={} period={} repeat_count={} xent_bits={:.6f}\n",
                                   res.tokens.size(), verdict.degenerate ? "yes" : "no", verdict.period(),
                                   verdict.repeat_count, xent);
            }
            return ok;
        }

        if (sweep->parsed()) {
            if (grid_items.empty() == preset.empty())
                throw UsageError("sweep needs exactly one of --grid or --preset");
            SweepGrid grid;
            if (!preset.empty()) {
                grid = preset_grid(preset == "frequency" ? BaselineKind::frequency : BaselineKind::repetition,
                                   temperatures);
            } else {
                grid.temperatures = temperatures;
                for (const auto& item : grid_items) grid.penalties.push_back(parse_penalty_setting(item));
            }
            SweepOptions opt;
            require(seed_count >= 1, "--seeds must be >= 1");
            opt.seeds = seed_range(seed_base, seed_count);
            opt.base.top_k = sweep_top_k;
            opt.base.top_p = sweep_top_p;
            opt.base.max_tokens = sweep_max_tokens;
            opt.base.lz = sweep_lz.config();
            opt.prompt_length = prompt_length;
            opt.detector_threshold = threshold;
            opt.threads = threads;
            write_output(sweep_csv(run_sweep(sweep_model, grid, opt)), sweep_out, out);
            return ok;
        }

        if (bench->parsed()) {
            for (std::size_t w : bench_opt.windows)
                LzPenaltyConfig{bench_opt.alpha, w, bench_opt.buffer}.validate();
            const auto rows = run_bench(bench_opt);
            for (const auto& r : rows)
                if (!r.matchers_identical)
                    err << "lzpen: naive and indexed matchers disagree for V=" << r.vocab_size << '\n';
            write_output(bench_csv(rows), bench_out, out);
            return ok;
        }

        if (compress->parsed()) {
            const TokenVec tokens = compress_in.read();
            const CodeStream stream = lzss_encode(tokens, compress_in.vocab, c_window, c_buffer);
            if (emit_blocks) {
                for (const CodeBlock& b : stream.blocks) {
                    if (b.is_match()) out << "L=" << b.length << " D=" << b.distance << '\n';
                    else out << "LIT=" << b.literal << '\n';
                }
            }
            const std::string rate =
                tokens.empty() ? "nan" : fmt::format("{:.6f}", compression_rate(stream));
            out << fmt::format("tokens={} blocks={} bits={:.6f} rate={}\n", tokens.size(), stream.blocks.size(),
                               stream.total_bits, rate);
            return ok;
        }

        if (trace->parsed()) {
            const TokenVec tokens = trace_in.read();
            const LzPenaltyConfig cfg = trace_lz.config();
            std::vector<std::size_t> order(trace_in.vocab);
            for (std::size_t t = 0; t < tokens.size(); ++t) {
                const TokenSpan ctx = TokenSpan(tokens).first(t);
                const Views views = simulate_views(ctx, cfg.window_capacity, cfg.buffer_capacity);
                PenaltyVector pv{std::vector<double>(trace_in.vocab)};
                const MatchResult m = penalty_vector_into(views, cfg.extension, cfg.matcher, pv.bits);
                const LambdaCounts counts = lambda_counts(views, trace_in.vocab, cfg.extension);

                const std::size_t k = std::min(top_n, trace_in.vocab);
                auto list = [&](auto cmp) {
                    std::iota(order.begin(), order.end(), std::size_t{0});
                    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(), cmp);
                    std::string s;
                    for (std::size_t i = 0; i < k; ++i)
                        s += fmt::format("{}{}:{:.4f}", i ? "," : "", order[i], pv.bits[order[i]]);
                    return s;
                };
                const std::string penalized = list([&](std::size_t a, std::size_t b) {
                    return pv.bits[a] < pv.bits[b] || (pv.bits[a] == pv.bits[b] && a < b);
                });
                const std::string boosted = list([&](std::size_t a, std::size_t b) {
                    return pv.bits[a] > pv.bits[b] || (pv.bits[a] == pv.bits[b] && a < b);
                });
                out << fmt::format(
                    "step={} l={} d={} lambda0={} lambda1={} lambda_ext={} next={} next_bits={:.4f} penalized={} "
                    "boosted={}\n",
                    t, m.length, m.distance, counts.literal, counts.singleton, counts.extension, tokens[t],
                    pv.bits[tokens[t]], penalized, boosted);
            }
            return ok;
        }
    } catch (const IoError& e) {
        err << "lzpen: " << e.what() << '\n';
        return io_error;
    } catch (const FormatError& e) {
        err << "lzpen: malformed input: " << e.what() << '\n';
        return format_error;
    } catch (const UsageError& e) {
        err << "lzpen: invalid arguments: " << e.what() << '\n';
        return usage_error;
    } catch (const std::exception& e) {
        err << "lzpen: error: " << e.what() << '\n';
        return runtime_failure;
    }
    return usage_error;
}

} // namespace lzpenalty::cli
