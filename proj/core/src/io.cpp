#include "avgdyn/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace avgdyn {

using nlohmann::json;

std::string fmt_real(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string matrix_to_csv(const MatrixXd& m) {
    std::string out;
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out += ',';
            out += fmt_real(m(i, j));
        }
        out += '\n';
    }
    return out;
}

MatrixXd matrix_from_csv(const std::string& text) {
    std::vector<std::vector<double>> rows;
    std::istringstream stream(text);
    std::string line;
    while (std::getline(stream, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        if (!rows.empty() && row.size() != rows.front().size())
            throw FormatError("matrix_from_csv: ragged rows");
        rows.push_back(std::move(row));
    }
    if (rows.empty())
        throw FormatError("matrix_from_csv: empty input");
    MatrixXd m(rows.size(), rows.front().size());
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    return m;
}

namespace {

json matrix_envelope(const MatrixXd& m, bool row_stochastic) {
    json j;
    j["n"] = m.rows();
    j["d"] = m.cols();
    std::vector<double> entries;
    entries.reserve(static_cast<std::size_t>(m.size()));
    for (int i = 0; i < m.rows(); ++i)
        for (int c = 0; c < m.cols(); ++c) entries.push_back(m(i, c));
    j["entries"] = std::move(entries);
    j["row_stochastic"] = row_stochastic;
    return j;
}

MatrixXd envelope_matrix(const json& j) {
    const long n = j.at("n").get<long>();
    const long d = j.at("d").get<long>();
    const auto entries = j.at("entries").get<std::vector<double>>();
    if (static_cast<long>(entries.size()) != n * d)
        throw FormatError("matrix envelope: entries length != n*d");
    MatrixXd m(n, d);
    for (long i = 0; i < n; ++i)
        for (long c = 0; c < d; ++c) m(i, c) = entries[static_cast<std::size_t>(i * d + c)];
    return m;
}

}  // namespace

std::string matrix_to_json(const StochasticMatrix& m) {
    return matrix_envelope(m.values(),
                           m.kind() == StochasticMatrix::Kind::row_stochastic)
        .dump(2);
}

StochasticMatrix matrix_from_json(const std::string& text) {
    const json j = json::parse(text);
    MatrixXd m = envelope_matrix(j);
    const bool rs = j.value("row_stochastic", false);
    return rs ? StochasticMatrix::row_stochastic(std::move(m))
              : StochasticMatrix::general(std::move(m));
}

std::string augmented_to_json(const AugmentedSystem& sys) {
    json j = matrix_envelope(sys.a_tilde().values(), true);
    j["blocks"] = {
        {"original", {0, sys.n_agents()}},
        {"ghosts", {sys.n_agents(), sys.total_nodes()}},
    };
    json c = json::array();
    for (int g = 0; g < sys.n_ghosts(); ++g) {
        json row = json::array();
        for (int l = 0; l < sys.dims(); ++l) row.push_back(sys.c_block()(g, l));
        c.push_back(std::move(row));
    }
    j["c_block"] = std::move(c);
    return j.dump(2);
}

std::string trajectory_to_csv(const Trajectory& traj) {
    std::string out = "t,agent_id,dim,value\n";
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        const MatrixXd& x = traj.states[k];
        for (int i = 0; i < x.rows(); ++i) {
            for (int l = 0; l < x.cols(); ++l) {
                out += std::to_string(traj.times[k]);
                out += ',';
                out += std::to_string(i);
                out += ',';
                out += std::to_string(l);
                out += ',';
                out += fmt_real(x(i, l));
                out += '\n';
            }
        }
    }
    return out;
}

std::string outcome_to_json(const OutcomeReport& outcome) {
    json j;
    j["converged"] = outcome.converged;
    j["t_stop"] = outcome.t_stop;
    j["heterogeneity"] = outcome.heterogeneity;
    j["outcome_class"] = outcome_class_name(outcome.outcome_class);
    j["cluster_count"] = outcome.cluster_count;
    if (outcome.x_star) {
        json rows = json::array();
        const MatrixXd& x = outcome.x_star->values();
        for (int i = 0; i < x.rows(); ++i) {
            json row = json::array();
            for (int l = 0; l < x.cols(); ++l) row.push_back(x(i, l));
            rows.push_back(std::move(row));
        }
        j["x_star"] = std::move(rows);
    } else {
        j["x_star"] = nullptr;
    }
    return j.dump(2);
}

std::string topology_to_json(const TopologyReport& topo) {
    json j;
    j["n_nodes"] = topo.n_nodes;
    j["scc_ids"] = topo.scc_ids;
    j["sink_sccs"] = topo.sink_sccs;
    j["quasi_connected"] = topo.quasi_connected;
    j["delta"] = topo.delta;
    j["longest_exit_distance"] = topo.longest_exit_distance;
    j["realization_period"] = topo.realization_period;
    json edges = json::array();
    for (const auto& [u, v] : topo.g_inf_edges) edges.push_back({u, v});
    j["g_inf_edges"] = std::move(edges);
    j["g_inf_is_estimate"] = true;
    return j.dump(2);
}

std::string theorem2_to_json(const Theorem2Report& report) {
    json j;
    j["q_cauchy"] = report.q_cauchy;
    j["r_cauchy"] = report.r_cauchy;
    j["cond1"] = report.cond1;
    j["cond2_residual"] = report.cond2_residual;
    j["heterogeneity_admissible"] = report.heterogeneity_admissible;
    return j.dump(2);
}

std::string absorption_to_json(const AbsorptionReport& report) {
    json j;
    auto dump_matrix = [](const MatrixXd& m) {
        json rows = json::array();
        for (int i = 0; i < m.rows(); ++i) {
            json row = json::array();
            for (int c = 0; c < m.cols(); ++c) row.push_back(m(i, c));
            rows.push_back(std::move(row));
        }
        return rows;
    };
    j["fundamental"] = dump_matrix(report.fundamental);
    j["absorb_probs"] = dump_matrix(report.absorb_probs);
    j["x_star"] = dump_matrix(report.x_star.values());
    j["expected_returns"] =
        std::vector<double>(report.expected_returns.data(),
                            report.expected_returns.data() + report.expected_returns.size());
    j["residual"] = report.residual;
    return j.dump(2);
}

std::string edge_list_to_csv(const Graph& graph, const MatrixXd* weights) {
    std::string out = "src,dst,weight\n";
    for (const auto& [u, v] : graph.edge_list()) {
        out += std::to_string(u);
        out += ',';
        out += std::to_string(v);
        out += ',';
        out += fmt_real(weights ? (*weights)(u, v) : 1.0);
        out += '\n';
    }
    return out;
}

std::string curtain_cells_to_csv(const std::vector<CurtainCell>& cells,
                                 std::uint64_t seed) {
    std::string out =
        "alpha,p0,trials,mean_x_star,outcome_class,n_consensus,n_fragmented,"
        "n_heterogeneous,n_non_convergent,seed,error\n";
    for (const auto& c : cells) {
        out += fmt_real(c.alpha);
        out += ',';
        out += fmt_real(c.p0);
        out += ',';
        out += std::to_string(c.trials);
        out += ',';
        out += fmt_real(c.mean_x_star);
        out += ',';
        out += outcome_class_name(c.outcome_class);
        out += ',';
        out += std::to_string(c.n_consensus);
        out += ',';
        out += std::to_string(c.n_fragmented);
        out += ',';
        out += std::to_string(c.n_heterogeneous);
        out += ',';
        out += std::to_string(c.n_non_convergent);
        out += ',';
        out += std::to_string(seed);
        out += ",\n";
    }
    return out;
}

std::string transitivity_rows_to_csv(const std::vector<TransitivityRow>& rows,
                                     std::uint64_t seed) {
    std::string out = "p,mean_transitivity,mean_expected_returns,resamples,seed,error\n";
    for (const auto& r : rows) {
        out += fmt_real(r.p);
        out += ',';
        out += fmt_real(r.mean_transitivity);
        out += ',';
        out += fmt_real(r.mean_expected_returns);
        out += ',';
        out += std::to_string(r.resamples);
        out += ',';
        out += std::to_string(seed);
        out += ",\n";
    }
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open for writing: " + path);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open for reading: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace avgdyn
