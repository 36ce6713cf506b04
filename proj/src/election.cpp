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

#include "qvote/election.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "qvote/netsim.hpp"

namespace qvote {

namespace {

std::string bits_string(std::span<const std::uint8_t> bits) {
    std::string s;
    for (auto b : bits) {
        s.push_back(b ? '1' : '0');
    }
    return s;
}

std::string labels_string(std::span<const StateLabel> labels) {
    std::string s;
    for (auto l : labels) {
        switch (l) {
            case StateLabel::Z0:
                s.push_back('0');
                break;
            case StateLabel::Z1:
                s.push_back('1');
                break;
            case StateLabel::Yplus:
                s.push_back('+');
                break;
            case StateLabel::Yminus:
                s.push_back('-');
                break;
        }
    }
    return s;
}

CsqbcParams session_params(const ElectionConfig &config) {
    CsqbcParams p = config.csqbc;
    p.k = committed_pairs(config.voters);
    return p;
}

// What a miner holds about one committed sequence after the commitment phase.
struct HeldCommitment {
    std::vector<StateLabel> labels;
    Bits cs;
    MeasurementRecord meas;
    unsigned pair = 0;
    bool probe = false;
};

class ElectionRun {
   public:
    explicit ElectionRun(const ElectionConfig &config)
        : config_(config), params_(session_params(config)), rng_(config.seed) {}

    ElectionResult run();

   private:
    void register_parties();
    void prepare_ballots();
    void audit_shares();
    std::optional<std::vector<HeldCommitment>> commit(std::size_t voter, std::size_t miner);
    std::optional<Bits> open(std::size_t voter, std::size_t miner, const std::vector<HeldCommitment> &held);
    bool agree();
    void abort(std::string reason) {
        result_.status = ElectionStatus::Aborted;
        result_.abort_reason = std::move(reason);
    }

    const ElectionConfig &config_;
    CsqbcParams params_;
    Rng rng_;
    Network net_;
    PartyId auditor_;
    std::vector<std::vector<std::uint64_t>> received_;
    ElectionResult result_;
};

void ElectionRun::register_parties() {
    auditor_ = net_.register_party(PartyRole::Auditor, "auditor-0");
    for (std::size_t j = 0; j < config_.miners; j++) {
        net_.register_party(PartyRole::Miner, "miner-" + std::to_string(j));
    }
    for (std::size_t i = 0; i < config_.voters; i++) {
        net_.register_party(PartyRole::Voter, "voter-" + std::to_string(i));
    }
}

void ElectionRun::prepare_ballots() {
    const std::size_t n = config_.voters;
    if (config_.votes) {
        result_.votes = *config_.votes;
    } else {
        for (std::size_t i = 0; i < n; i++) {
            result_.votes.push_back(coin(rng_) ? 1 : 0);
        }
    }
    result_.true_count = static_cast<std::uint64_t>(std::count(result_.votes.begin(), result_.votes.end(), 1));

    result_.matrix = generate_matrix(n, config_.entry_bound, rng_);
    received_.assign(n, std::vector<std::uint64_t>(n, 0));
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            std::uint64_t value = result_.matrix.at(i, j);
            if (i == j) {
                received_[j][i] = value;
                continue;
            }
            if (std::find(config_.ballot_lies.begin(), config_.ballot_lies.end(), std::pair{i, j}) !=
                config_.ballot_lies.end()) {
                value += 1;
            }
            received_[j][i] = value;
            net_.send_classical(
                net_.voters()[i], net_.voters()[j], PayloadType::VoteShare, {{"i", i}, {"j", j}, {"value", value}});
        }
    }
    for (std::size_t j = 0; j < n; j++) {
        result_.ballots.push_back(masked_ballot(j, received_[j], result_.votes[j], n));
    }
}

void ElectionRun::audit_shares() {
    const std::size_t n = config_.voters;
    for (std::size_t i = 0; i < n; i++) {
        for (std::size_t j = 0; j < n; j++) {
            if (i == j) {
                continue;
            }
            const nlohmann::json query{{"i", i}, {"j", j}};
            net_.send_classical(auditor_, net_.voters()[i], PayloadType::AuditQuery, query);
            net_.send_classical(
                net_.voters()[i], auditor_, PayloadType::AuditReply,
                {{"i", i}, {"j", j}, {"value", result_.matrix.at(i, j)}});
            net_.send_classical(auditor_, net_.voters()[j], PayloadType::AuditQuery, query);
            net_.send_classical(
                net_.voters()[j], auditor_, PayloadType::AuditReply, {{"i", i}, {"j", j}, {"value", received_[j][i]}});
        }
    }
    result_.audit_claims = reconstruct_audit_claims(net_.transcript());
    nlohmann::json flagged = nlohmann::json::array();
    for (const auto &claim : result_.audit_claims) {
        result_.audit_verdicts.push_back(audit(claim));
        if (result_.audit_verdicts.back() == AuditVerdict::Cheating) {
            flagged.push_back({claim.i, claim.j});
        }
    }
    net_.send_classical(auditor_, net_.eps(), PayloadType::AuditVerdict, {{"flagged", flagged}});
}

std::optional<std::vector<HeldCommitment>> ElectionRun::commit(std::size_t voter, std::size_t miner) {
    const PartyId v = net_.voters()[voter];
    const PartyId m = net_.miners()[miner];
    result_.sessions++;
    result_.qubits_used += params_.sequences() * params_.n;

    const bool cheating = config_.probe_miner && *config_.probe_miner == miner;
    const std::size_t probe = cheating ? uniform_index(rng_, params_.sequences()) : params_.sequences();

    // Preparation: the miner sends m + k sequences to the voter.
    std::vector<std::vector<StateLabel>> labels;
    std::vector<RegisterHandle> handles;
    for (std::size_t s = 0; s < params_.sequences(); s++) {
        if (s == probe) {
            labels.push_back(probe_labels(params_.n));
        } else {
            labels.push_back(prepare_bus(params_, rng_).labels);
        }
        handles.push_back(net_.create_register(m, register_from_labels(labels.back())));
        net_.transfer_quantum(m, v, handles.back(), PayloadType::BusTransfer);
    }
    std::vector<QubitRegister> sequences;
    for (auto h : handles) {
        sequences.push_back(net_.take(v, h));
    }
    auto reveal = [&](std::size_t idx) {
        net_.send_classical(v, m, PayloadType::RevealRequest, {{"voter", voter}, {"sequence", idx}});
        auto shown = idx == probe ? probe_cover_labels(params_.n) : labels[idx];
        net_.send_classical(
            m, v, PayloadType::RevealLabels, {{"voter", voter}, {"sequence", idx}, {"labels", labels_string(shown)}});
        return shown;
    };
    Selection sel = select_and_verify(std::move(sequences), params_, reveal, rng_);
    net_.send_classical(
        v, m, PayloadType::VerifyVerdict, {{"voter", voter}, {"verdict", sel.verdict == Verdict::Pass ? "pass" : "fail"}});
    if (sel.verdict == Verdict::Fail) {
        return std::nullopt;
    }

    // Commitment: two ballot bits per retained sequence.
    const Bits &bits = result_.ballots[voter].bits;
    std::vector<HeldCommitment> held;
    for (std::size_t c = 0; c < params_.k; c++) {
        HeldCommitment h;
        h.pair = pair_value(bits[2 * c], bits[2 * c + 1]);
        h.labels = labels[sel.retained_indices[c]];
        h.probe = sel.retained_indices[c] == probe;
        auto committed = commit_bits(std::move(sel.retained[c]), h.pair, rng_);
        h.cs = std::move(committed.cs);
        RegisterHandle back = net_.create_register(v, std::move(committed.reg));
        net_.transfer_quantum(v, m, back, PayloadType::CommitTransfer);
        QubitRegister arrived = net_.take(m, back);
        if (h.probe) {
            h.meas = measure_in_bases(std::move(arrived), probe_bases(params_.n), rng_);
            result_.probe_retained++;
            auto guess = infer_probe_commitment(h.meas);
            if (guess && *guess == h.pair) {
                result_.probe_leaks++;
            }
        } else {
            h.meas = miner_measure(std::move(arrived), rng_);
        }
        held.push_back(std::move(h));
    }
    return held;
}

std::optional<Bits> ElectionRun::open(std::size_t voter, std::size_t miner, const std::vector<HeldCommitment> &held) {
    const PartyId v = net_.voters()[voter];
    const PartyId m = net_.miners()[miner];
    nlohmann::json cs = nlohmann::json::array();
    for (const auto &h : held) {
        cs.push_back(bits_string(h.cs));
    }
    net_.send_classical(v, m, PayloadType::CsReveal, {{"voter", voter}, {"cs", cs}});

    Bits opened;
    bool ok = true;
    nlohmann::json statuses = nlohmann::json::array();
    for (const auto &h : held) {
        DecodeResult r = decode_commitment(h.labels, h.cs, h.meas);
        statuses.push_back(decode_status_name(r.status));
        if (r.status == DecodeStatus::Ambiguous) {
            result_.ambiguous_decodes++;
        } else if (r.status == DecodeStatus::Inconsistent) {
            result_.inconsistent_decodes++;
        }
        if (!r.ok()) {
            ok = false;
            continue;
        }
        opened.push_back(static_cast<std::uint8_t>(r.bits >> 1));
        opened.push_back(static_cast<std::uint8_t>(r.bits & 1));
    }
    nlohmann::json payload{{"voter", voter}, {"status", statuses}};
    if (ok) {
        payload["bits"] = bits_string(opened);
    }
    net_.send_classical(m, v, PayloadType::DecodeResult, payload);
    if (!ok) {
        return std::nullopt;
    }
    return opened;
}

bool ElectionRun::agree() {
    const std::size_t n = config_.voters;
    for (std::size_t i = 0; i < n; i++) {
        std::vector<Bits> miner_bits;
        for (std::size_t j = 0; j < config_.miners; j++) {
            miner_bits.push_back(encode_bits(*result_.decoded[i][j], ballot_width(n)));
        }
        ConsensusResult cr = consensus_on_ballot(
            miner_bits, config_.qba.copies, config_.adversary, config_.qba.lambda, rng_, config_.qba.source);
        for (std::size_t b = 0; b < cr.rounds.size(); b++) {
            const auto &roles = cr.roles[b];
            const auto &out = cr.rounds[b];
            for (std::size_t j = 0; j < config_.miners; j++) {
                net_.send_classical(
                    net_.eps(), net_.miners()[j], PayloadType::AharonovDistribute,
                    {{"voter", i}, {"bit", b}, {"copies", config_.qba.copies}});
            }
            const PartyId leader = net_.miners()[roles.leader];
            const PartyId r1 = net_.miners()[roles.receivers[0]];
            const PartyId r2 = net_.miners()[roles.receivers[1]];
            net_.send_classical(leader, r1, PayloadType::LeaderBit, {{"voter", i}, {"bit", b}, {"value", out.received_bits[0]}});
            net_.send_classical(leader, r2, PayloadType::LeaderBit, {{"voter", i}, {"bit", b}, {"value", out.received_bits[1]}});
            net_.send_classical(r1, r2, PayloadType::ConsistencyFlag, {{"voter", i}, {"bit", b}, {"flag", out.flags[0]}});
            net_.send_classical(r2, r1, PayloadType::ConsistencyFlag, {{"voter", i}, {"bit", b}, {"flag", out.flags[1]}});
            if (out.convince_attempted) {
                net_.send_classical(
                    r1, r2, PayloadType::ConvinceIndices,
                    {{"voter", i}, {"bit", b}, {"count", out.evidence_size}, {"valid", out.valid_evidence}});
            }
            nlohmann::json payload{{"voter", i}, {"bit", b}, {"kind", outcome_kind_name(out.kind)}};
            if (out.agreed_bit) {
                payload["value"] = *out.agreed_bit;
            }
            net_.send_classical(r1, net_.eps(), PayloadType::ConsensusResult, payload);
        }
        result_.consensus.push_back(cr.kinds);
        if (!cr.all_successful()) {
            abort("consensus on voter " + std::to_string(i) + " ended in a detectable broadcast");
            return false;
        }
        result_.agreed_values.push_back(decode_bits(cr.agreed_bits()));
    }
    return true;
}

ElectionResult ElectionRun::run() {
    register_parties();
    prepare_ballots();
    audit_shares();

    const std::size_t n = config_.voters;
    result_.decoded.assign(n, std::vector<std::optional<std::uint64_t>>(config_.miners));

    // Commitment phase for every voter/miner pair, then the opening phase.
    std::vector<std::vector<std::vector<HeldCommitment>>> held(n, std::vector<std::vector<HeldCommitment>>(config_.miners));
    for (std::size_t i = 0; i < n && result_.completed(); i++) {
        for (std::size_t j = 0; j < config_.miners; j++) {
            auto h = commit(i, j);
            if (!h) {
                abort("miner M" + std::to_string(j) + " failed sequence verification by voter V" + std::to_string(i));
                break;
            }
            held[i][j] = std::move(*h);
        }
    }
    for (std::size_t i = 0; i < n && result_.completed(); i++) {
        for (std::size_t j = 0; j < config_.miners && result_.completed(); j++) {
            auto opened = open(i, j, held[i][j]);
            std::size_t attempts = 0;
            while (!opened && attempts < config_.retry_budget) {
                attempts++;
                result_.retries++;
                auto fresh = commit(i, j);
                if (!fresh) {
                    abort("miner M" + std::to_string(j) + " failed sequence verification by voter V" + std::to_string(i));
                    break;
                }
                opened = open(i, j, *fresh);
            }
            if (!result_.completed()) {
                break;
            }
            if (!opened) {
                abort("opening of voter V" + std::to_string(i) + " at miner M" + std::to_string(j) +
                      " failed after " + std::to_string(config_.retry_budget) + " retries");
                break;
            }
            result_.decoded[i][j] = decode_bits(*opened);
        }
    }

    if (result_.completed() && agree()) {
        std::vector<MaskedBallot> agreed;
        for (std::size_t i = 0; i < n; i++) {
            const auto v = result_.agreed_values[i];
            agreed.push_back({i, v, encode_bits(v, ballot_width(n))});
        }
        result_.tally = tally(agreed, n);
        net_.send_classical(net_.eps(), auditor_, PayloadType::TallyResult, {{"tally", result_.tally}});
    }

    result_.transcript_jsonl = net_.transcript_jsonl();
    result_.transcript_entries = net_.transcript().size();
    return std::move(result_);
}

}  // namespace

void ElectionConfig::validate() const {
    if (voters < 2) {
        throw std::invalid_argument("at least two voters are required");
    }
    if (miners != kAgreementMiners) {
        throw std::invalid_argument("exactly 3 miners are supported (got " + std::to_string(miners) + ")");
    }
    if (votes) {
        if (votes->size() != voters) {
            throw std::invalid_argument("vote vector length must equal the voter count");
        }
        for (auto v : *votes) {
            if (v > 1) {
                throw std::invalid_argument("votes must be 0 or 1");
            }
        }
    }
    session_params(*this).validate();
    if (!(qba.lambda > 0.0 && qba.lambda <= 1.0)) {
        throw std::invalid_argument("lambda must be in (0, 1]");
    }
    if (probe_miner && *probe_miner >= miners) {
        throw std::invalid_argument("probe miner index out of range");
    }
    for (const auto &[i, j] : ballot_lies) {
        if (i >= voters || j >= voters || i == j) {
            throw std::invalid_argument("ballot lies must name two distinct voters");
        }
    }
    if (entry_bound < 1) {
        throw std::invalid_argument("entry bound must be at least 1");
    }
}

nlohmann::json ElectionConfig::to_json() const {
    nlohmann::json lies = nlohmann::json::array();
    for (const auto &[i, j] : ballot_lies) {
        lies.push_back({i, j});
    }
    return {
        {"voters", voters},
        {"miners", miners},
        {"votes", votes ? bits_string(*votes) : std::string("random")},
        {"n", csqbc.n},
        {"m", csqbc.m},
        {"k", voters >= 2 ? committed_pairs(voters) : 0},
        {"copies", qba.copies},
        {"lambda", qba.lambda},
        {"source", sample_source_name(qba.source)},
        {"adversary", adversary.name()},
        {"probe_miner", probe_miner ? nlohmann::json(*probe_miner) : nlohmann::json(nullptr)},
        {"ballot_lies", lies},
        {"retry_budget", retry_budget},
        {"entry_bound", entry_bound},
        {"seed", seed},
    };
}

nlohmann::json ElectionResult::to_json(const ElectionConfig &config) const {
    nlohmann::json ballots_json = nlohmann::json::array();
    for (const auto &b : ballots) {
        ballots_json.push_back(qvote::to_json(b));
    }
    nlohmann::json decoded_json = nlohmann::json::array();
    for (const auto &row : decoded) {
        nlohmann::json r = nlohmann::json::array();
        for (const auto &v : row) {
            r.push_back(v ? nlohmann::json(*v) : nlohmann::json(nullptr));
        }
        decoded_json.push_back(r);
    }
    nlohmann::json consensus_json = nlohmann::json::array();
    for (const auto &row : consensus) {
        nlohmann::json r = nlohmann::json::array();
        for (auto k : row) {
            r.push_back(outcome_kind_name(k));
        }
        consensus_json.push_back(r);
    }
    nlohmann::json claims = nlohmann::json::array();
    nlohmann::json flagged = nlohmann::json::array();
    for (std::size_t c = 0; c < audit_claims.size(); c++) {
        const auto &claim = audit_claims[c];
        const bool cheating = audit_verdicts[c] == AuditVerdict::Cheating;
        claims.push_back(
            {{"i", claim.i},
             {"j", claim.j},
             {"value_from_i", claim.value_from_i},
             {"value_from_j", claim.value_from_j},
             {"verdict", cheating ? "cheating" : "honest"}});
        if (cheating) {
            flagged.push_back({claim.i, claim.j});
        }
    }
    return {
        {"config", config.to_json()},
        {"seed", config.seed},
        {"status", completed() ? "completed" : "aborted"},
        {"abort_reason", abort_reason},
        {"votes", bits_string(votes)},
        {"true_count", true_count},
        {"tally", completed() ? nlohmann::json(tally) : nlohmann::json(nullptr)},
        {"matrix", qvote::to_json(matrix)},
        {"ballots", ballots_json},
        {"decoded", decoded_json},
        {"consensus", consensus_json},
        {"agreed_values", agreed_values},
        {"audit", {{"claims", claims}, {"flagged", flagged}}},
        {"statistics",
         {{"sessions", sessions},
          {"retries", retries},
          {"ambiguous_decodes", ambiguous_decodes},
          {"inconsistent_decodes", inconsistent_decodes},
          {"qubits_used", qubits_used},
          {"probe_retained", probe_retained},
          {"probe_leaks", probe_leaks},
          {"transcript_entries", transcript_entries}}},
    };
}

ElectionResult run_election(const ElectionConfig &config) {
    config.validate();
    return ElectionRun(config).run();
}

}  // namespace qvote
