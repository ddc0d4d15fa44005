#pragma once

// Grid experiments: penalty x strength x temperature, each cell run over a
// fixed list of seeds. Output rows are sorted by grid key, so results do not
// depend on how cells were scheduled across threads.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <fmt/format.h>

#include "lzpenalty/baseline_penalties.hpp"
#include "lzpenalty/eval.hpp"
#include "lzpenalty/sampler.hpp"
#include "lzpenalty/toy_lm.hpp"

namespace lzpenalty {

struct PenaltySetting {
    PenaltyKind kind = PenaltyKind::none;
    double strength = 0.0; // alpha for lz, s for frequency, theta for repetition
};

struct SweepGrid {
    std::vector<PenaltySetting> penalties;
    std::vector<double> temperatures;
};

/// Frequency or repetition strengths from the reference sweeps, plus one LZ row.
inline SweepGrid preset_grid(BaselineKind kind, std::vector<double> temperatures, double lz_alpha = 0.15) {
    SweepGrid g;
    g.temperatures = std::move(temperatures);
    g.penalties.push_back({PenaltyKind::lz, lz_alpha});
    const auto& strengths =
        kind == BaselineKind::frequency ? frequency_sweep_strengths() : repetition_sweep_strengths();
    const PenaltyKind pk = kind == BaselineKind::frequency ? PenaltyKind::frequency : PenaltyKind::repetition;
    for (double s : strengths) g.penalties.push_back({pk, s});
    return g;
}

struct SweepOptions {
    std::vector<std::uint64_t> seeds;
    SamplerConfig base;
    std::size_t prompt_length = 4;
    std::size_t detector_threshold = 20;
    unsigned threads = 0; // 0 = hardware concurrency
};

struct SweepRow {
    PenaltySetting penalty;
    double temperature = 0.0;
    std::size_t seed_count = 0;
    double repetition_rate = 0.0;
    double mean_xent_bits = 0.0;
    double distinct2 = 0.0;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::uint64_t> seeds;
};

inline std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> s(count);
    for (std::size_t i = 0; i < count; ++i) s[i] = first + i;
    return s;
}

/// Prompt drawn from a stream independent of the sampler's.
inline TokenVec seeded_prompt(std::uint64_t seed, std::size_t length, std::size_t vocab_size) {
    RandomSource rng(seed ^ 0x9e3779b97f4a7c15ULL);
    TokenVec p(length);
    for (Token& t : p) t = static_cast<Token>(rng.next_u64() % vocab_size);
    return p;
}

inline SamplerConfig cell_config(const SamplerConfig& base, const PenaltySetting& pen, double temperature) {
    SamplerConfig cfg = base;
    cfg.penalty = pen.kind;
    cfg.temperature = temperature;
    if (pen.kind == PenaltyKind::lz) cfg.lz.alpha = pen.strength;
    else cfg.strength = pen.strength;
    return cfg;
}

template <LanguageModel M>
SweepRow run_cell(const M& model, const PenaltySetting& pen, double temperature, const SweepOptions& opt) {
    SweepRow row{pen, temperature, opt.seeds.size(), 0.0, 0.0, 0.0};
    std::size_t degenerate = 0;
    for (std::uint64_t seed : opt.seeds) {
        SamplerConfig cfg = cell_config(opt.base, pen, temperature);
        cfg.seed = seed;
        const TokenVec prompt = seeded_prompt(seed, opt.prompt_length, model.vocab_size());
        const GenerationResult gen = generate(model, cfg, prompt);
        if (detect_degenerate(gen.tokens, opt.detector_threshold).degenerate) ++degenerate;
        row.mean_xent_bits += xent_under_model(model, gen.tokens, prompt);
        row.distinct2 += distinct_n(gen.tokens, 2);
    }
    const double n = static_cast<double>(opt.seeds.size());
    row.repetition_rate = static_cast<double>(degenerate) / n;
    row.mean_xent_bits /= n;
    row.distinct2 /= n;
    return row;
}

template <LanguageModel M>
SweepResult run_sweep(const M& model, const SweepGrid& grid, const SweepOptions& opt) {
    require(!grid.penalties.empty() && !grid.temperatures.empty(), "sweep grid must be non-empty");
    require(!opt.seeds.empty(), "sweep needs at least one seed");
    for (const auto& pen : grid.penalties)
        for (double t : grid.temperatures) cell_config(opt.base, pen, t).validate();

    struct Cell {
        PenaltySetting pen;
        double temperature;
    };
    std::vector<Cell> cells;
    for (const auto& pen : grid.penalties)
        for (double t : grid.temperatures) cells.push_back({pen, t});

    std::vector<SweepRow> rows(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++)
            rows[i] = run_cell(model, cells[i].pen, cells[i].temperature, opt);
    };
    unsigned threads = opt.threads != 0 ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = std::min<unsigned>(threads, static_cast<unsigned>(cells.size()));
    {
        std::vector<std::jthread> pool;
        for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
        worker();
    }

    std::sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
        return std::tuple(static_cast<int>(a.penalty.kind), a.penalty.strength, a.temperature) <
               std::tuple(static_cast<int>(b.penalty.kind), b.penalty.strength, b.temperature);
    });
    return {std::move(rows), opt.seeds};
}

inline SweepResult run_sweep(const std::string& model_spec, const SweepGrid& grid, const SweepOptions& opt) {
    return run_sweep(parse_model_spec(model_spec), grid, opt);
}

inline std::string sweep_csv(const SweepResult& r) {
    std::string out = "penalty,strength,temperature,seed_count,repetition_rate,mean_xent_bits,distinct2\n";
    for (const SweepRow& row : r.rows) {
        out += fmt::format("{},{},{},{},{:.6f},{:.6f},{:.6f}\n", penalty_name(row.penalty.kind), row.penalty.strength,
                           row.temperature, row.seed_count, row.repetition_rate, row.mean_xent_bits,
                           row.distinct2);
    }
    return out;
}

} // namespace lzpenalty
