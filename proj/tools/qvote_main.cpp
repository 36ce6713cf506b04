// Copyright 2026 The qvote Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// qvote: run simulated elections and protocol experiments.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qvote/election.hpp"
#include "qvote/experiments.hpp"

namespace {

using namespace qvote;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitAbort = 2;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string &text, char sep) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        parts.push_back(item);
    }
    return parts;
}

std::size_t parse_count(const std::string &text) {
    std::size_t pos = 0;
    unsigned long long v = 0;
    try {
        v = std::stoull(text, &pos);
    } catch (const std::exception &) {
        throw ConfigError("not a non-negative integer: '" + text + "'");
    }
    if (pos != text.size() || text.empty() || text[0] == '-') {
        throw ConfigError("not a non-negative integer: '" + text + "'");
    }
    return static_cast<std::size_t>(v);
}

double parse_real(const std::string &text) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception &) {
        throw ConfigError("not a number: '" + text + "'");
    }
    if (pos != text.size()) {
        throw ConfigError("not a number: '" + text + "'");
    }
    return v;
}

/// "a:b" inclusive range, "a,b,c" list, or a single value.
std::vector<std::size_t> parse_counts(const std::string &text) {
    std::vector<std::size_t> out;
    auto bounds = split(text, ':');
    if (bounds.size() == 2) {
        const auto lo = parse_count(bounds[0]);
        const auto hi = parse_count(bounds[1]);
        if (lo > hi) {
            throw ConfigError("empty range '" + text + "'");
        }
        for (auto v = lo; v <= hi; v++) {
            out.push_back(v);
        }
        return out;
    }
    for (const auto &part : split(text, ',')) {
        out.push_back(parse_count(part));
    }
    if (out.empty()) {
        throw ConfigError("empty list '" + text + "'");
    }
    return out;
}

std::vector<double> parse_reals(const std::string &text) {
    std::vector<double> out;
    for (const auto &part : split(text, ',')) {
        out.push_back(parse_real(part));
    }
    if (out.empty()) {
        throw ConfigError("empty list '" + text + "'");
    }
    return out;
}

Bits parse_votes(const std::string &text) {
    Bits votes;
    for (char c : text) {
        if (c != '0' && c != '1') {
            throw ConfigError("votes must be a string of 0 and 1 (got '" + text + "')");
        }
        votes.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return votes;
}

std::pair<std::size_t, std::size_t> parse_pair(const std::string &text) {
    auto parts = split(text, ':');
    if (parts.size() != 2) {
        throw ConfigError("expected i:j (got '" + text + "')");
    }
    return {parse_count(parts[0]), parse_count(parts[1])};
}

nlohmann::json counts_json(const std::vector<std::size_t> &values) {
    return nlohmann::json(values);
}

void write_file(const std::string &path, const std::string &content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw ConfigError("cannot write '" + path + "'");
    }
    out << content;
}

std::string transcript_path(const std::string &out) {
    const std::string suffix = ".json";
    if (out.size() > suffix.size() && out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
        return out.substr(0, out.size() - suffix.size()) + ".transcript.jsonl";
    }
    return out + ".transcript.jsonl";
}

struct Options {
    std::uint64_t seed = 1;
    unsigned jobs = 1;
    std::size_t trials = 1000;
    std::string n = "16";
    std::string m = "3";
    std::string copies = "30";
    double lambda = 0.9;
    std::string gamma = "0";
    std::string source = "ideal";
    std::string csv;
    std::string out;

    std::size_t voters = 3;
    std::size_t miners = 3;
    std::string run_gamma = "none";
    std::string votes = "random";
    std::size_t retries = 3;
    std::vector<std::string> lies;
    std::optional<std::size_t> probe_miner;
    std::uint64_t entry_bound = kDefaultEntryBound;

    std::string mode = "voter";
    std::string noise = "0,0.01,0.02,0.03,0.04,0.05,0.06,0.07,0.08,0.09,0.1,0.11,0.12,0.13,0.14,0.15,0.16,0.17,0.18,0.19,0.2";
};

std::uint64_t resolved_seed(const Options &o) {
    if (const char *env = std::getenv("QVOTE_SEED")) {
        return static_cast<std::uint64_t>(parse_count(env));
    }
    return o.seed;
}

std::size_t single_count(const std::string &flag, const std::string &text) {
    auto values = parse_counts(text);
    if (values.size() != 1) {
        throw ConfigError(flag + " takes a single value here");
    }
    return values.front();
}

int run_command(const Options &o) {
    ElectionConfig c;
    c.voters = o.voters;
    c.miners = o.miners;
    if (o.votes != "random") {
        c.votes = parse_votes(o.votes);
    }
    c.csqbc.n = single_count("--n", o.n);
    c.csqbc.m = single_count("--m", o.m);
    c.qba.copies = single_count("--copies", o.copies);
    c.qba.lambda = o.lambda;
    c.qba.source = parse_sample_source(o.source);
    c.adversary = AdversaryModel::parse(o.run_gamma);
    c.probe_miner = o.probe_miner;
    for (const auto &lie : o.lies) {
        c.ballot_lies.push_back(parse_pair(lie));
    }
    c.retry_budget = o.retries;
    c.entry_bound = o.entry_bound;
    c.seed = resolved_seed(o);

    auto result = run_election(c);
    const std::string doc = result.to_json(c).dump(2) + "\n";
    if (o.out.empty()) {
        std::cout << doc;
    } else {
        write_file(o.out, doc);
        write_file(transcript_path(o.out), result.transcript_jsonl);
    }
    if (!result.completed()) {
        std::cerr << "election aborted: " << result.abort_reason << "\n";
        return kExitAbort;
    }
    return kExitOk;
}

/// Writes "# {config}" followed by the table, to --csv or stdout.
template <typename Row>
void emit_csv(const Options &o, const nlohmann::json &config, const std::vector<Row> &rows) {
    std::ostringstream text;
    text << "# " << config.dump() << "\n";
    write_csv(text, std::span<const Row>(rows));
    if (o.csv.empty()) {
        std::cout << text.str();
    } else {
        write_file(o.csv, text.str());
    }
}

int experiment_csqbc(const Options &o) {
    const auto seed = resolved_seed(o);
    const auto ns = parse_counts(o.n);
    const auto ms = parse_counts(o.m);
    Rng rng(seed);
    std::vector<CsqbcRow> rows;
    for (auto m : ms) {
        auto part = run_experiment_csqbc(ns, m, o.trials, rng, o.jobs);
        rows.insert(rows.end(), part.begin(), part.end());
    }
    nlohmann::json config{
        {"experiment", "csqbc"}, {"n", counts_json(ns)}, {"m", counts_json(ms)}, {"trials", o.trials}, {"seed", seed}};
    emit_csv(o, config, rows);
    return kExitOk;
}

int experiment_qba(const Options &o) {
    const auto seed = resolved_seed(o);
    const auto ts = parse_counts(o.copies);
    const auto adversary = AdversaryModel::parse(o.gamma);
    const auto source = parse_sample_source(o.source);
    Rng rng(seed);
    auto rows = run_experiment_qba(ts, o.lambda, adversary, o.trials, rng, o.jobs, source);
    nlohmann::json config{
        {"experiment", "qba"},
        {"copies", counts_json(ts)},
        {"lambda", o.lambda},
        {"gamma", adversary.name()},
        {"source", sample_source_name(source)},
        {"trials", o.trials},
        {"seed", seed}};
    emit_csv(o, config, rows);
    return kExitOk;
}

int experiment_cheat(const Options &o) {
    const auto seed = resolved_seed(o);
    CheatMode mode;
    if (o.mode == "voter") {
        mode = CheatMode::Voter;
    } else if (o.mode == "miner") {
        mode = CheatMode::Miner;
    } else {
        throw ConfigError("--mode must be voter or miner");
    }
    const auto ns = parse_counts(o.n);
    const auto ms = parse_counts(o.m);
    Rng rng(seed);
    auto rows = run_experiment_cheat(mode, ns, ms, o.trials, rng, o.jobs);
    nlohmann::json config{
        {"experiment", "cheat"},
        {"mode", o.mode},
        {"n", counts_json(ns)},
        {"m", counts_json(ms)},
        {"trials", o.trials},
        {"seed", seed}};
    emit_csv(o, config, rows);
    return kExitOk;
}

int experiment_fidelity(const Options &o) {
    const auto seed = resolved_seed(o);
    const auto ps = parse_reals(o.noise);
    auto rows = run_experiment_fidelity(ps);
    nlohmann::json config{{"experiment", "fidelity"}, {"noise", ps}, {"seed", seed}};
    emit_csv(o, config, rows);
    return kExitOk;
}

}  // namespace

int main(int argc, char **argv) {
    Options o;
    CLI::App app{"qvote: self-tallying quantum voting simulator"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App *cmd) {
        cmd->add_option("--seed", o.seed, "RNG seed (QVOTE_SEED overrides)");
        cmd->add_option("--jobs", o.jobs, "Worker threads for Monte-Carlo trials")->check(CLI::PositiveNumber);
    };

    auto *run = app.add_subcommand("run", "Run one election and write the result JSON");
    add_common(run);
    run->add_option("--voters", o.voters, "Number of voters");
    run->add_option("--miners", o.miners, "Number of miners (agreement runs among exactly 3)");
    run->add_option("--votes", o.votes, "Votes as a 0/1 string, or 'random'");
    run->add_option("--n", o.n, "Qubits per sequence");
    run->add_option("--m", o.m, "Decoy sequences");
    run->add_option("--copies", o.copies, "Aharonov copies per agreement round");
    run->add_option("--lambda", o.lambda, "Convince threshold");
    run->add_option("--gamma", o.run_gamma, "Complicit miner: none (default), leader, 0 (random) or 1..3");
    run->add_option("--source", o.source, "Aharonov sampling: ideal or statevector");
    run->add_option("--retries", o.retries, "Fresh commitments allowed after a failed opening");
    run->add_option("--lie", o.lies, "Voter i tampers with the share sent to voter j (i:j, repeatable)");
    run->add_option("--probe-miner", o.probe_miner, "Miner (0-based) that plants a probe sequence");
    run->add_option("--entry-bound", o.entry_bound, "Largest off-diagonal matrix entry");
    run->add_option("--out", o.out, "Result JSON path; the transcript is written next to it");

    auto *experiment = app.add_subcommand("experiment", "Monte-Carlo experiments emitting CSV");
    experiment->require_subcommand(1);

    auto *csqbc = experiment->add_subcommand("csqbc", "Honest commitment success rate per n");
    add_common(csqbc);
    csqbc->add_option("--n", o.n, "Sequence lengths (list or start:end)");
    csqbc->add_option("--m", o.m, "Decoy counts (list or start:end)");
    csqbc->add_option("--trials", o.trials, "Trials per point");
    csqbc->add_option("--csv", o.csv, "CSV output path (default stdout)");

    auto *qba = experiment->add_subcommand("qba", "Agreement success probability per copy count");
    add_common(qba);
    qba->add_option("--copies", o.copies, "Copy counts (list or start:end)");
    qba->add_option("--lambda", o.lambda, "Convince threshold");
    qba->add_option("--gamma", o.gamma, "Complicit miner: none, leader, 0 (random) or 1..3");
    qba->add_option("--source", o.source, "Aharonov sampling: ideal or statevector");
    qba->add_option("--trials", o.trials, "Trials per point");
    qba->add_option("--csv", o.csv, "CSV output path (default stdout)");

    auto *cheat = experiment->add_subcommand("cheat", "Cheating voter or miner success rate");
    add_common(cheat);
    cheat->add_option("--mode", o.mode, "voter or miner");
    cheat->add_option("--n", o.n, "Sequence lengths (list or start:end)");
    cheat->add_option("--m", o.m, "Decoy counts (list or start:end)");
    cheat->add_option("--trials", o.trials, "Trials per point");
    cheat->add_option("--csv", o.csv, "CSV output path (default stdout)");

    auto *fid = experiment->add_subcommand("fidelity", "Aharonov state fidelity under depolarizing noise");
    add_common(fid);
    fid->add_option("--noise", o.noise, "Per-qubit depolarizing probabilities (comma list)");
    fid->add_option("--csv", o.csv, "CSV output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (run->parsed()) {
            return run_command(o);
        }
        if (csqbc->parsed()) {
            return experiment_csqbc(o);
        }
        if (qba->parsed()) {
            return experiment_qba(o);
        }
        if (cheat->parsed()) {
            return experiment_cheat(o);
        }
        if (fid->parsed()) {
            return experiment_fidelity(o);
        }
    } catch (const ConfigError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::invalid_argument &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfig;
    }
    return kExitConfig;
}
