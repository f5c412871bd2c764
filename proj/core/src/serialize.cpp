#include "dimerwave/serialize.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dimerwave/errors.hpp"

namespace dimerwave {

using nlohmann::json;
using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open for writing: " + tmp.string());
        out << content;
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    fs::rename(tmp, target);
}

namespace {

// Array of records {k, re1, im1, re2, im2} for k >= 0; negative modes are
// implied by Hermitian symmetry, and the truncation is the largest k present.
ordered_json field_json(const PeriodicField& f) {
    ordered_json modes = ordered_json::array();
    for (int k = 0; k <= f.truncation(); ++k) {
        Vec2c v = f.coeff(k);
        ordered_json m;
        m["k"] = k;
        m["re1"] = v(0).real();
        m["im1"] = v(0).imag();
        m["re2"] = v(1).real();
        m["im2"] = v(1).imag();
        modes.push_back(std::move(m));
    }
    return modes;
}

PeriodicField field_from(const json& j) {
    if (!j.is_array() || j.empty()) throw ConfigError("field JSON must be a nonempty array");
    int n = 0;
    for (const json& m : j) {
        int k = m.at("k").get<int>();
        if (k < 0) throw ConfigError("field mode index must be >= 0");
        n = std::max(n, k);
    }
    PeriodicField f(n);
    for (const json& m : j) {
        int k = m.at("k").get<int>();
        f.set_coeff(k, Vec2c(Complex(m.at("re1").get<double>(), m.at("im1").get<double>()),
                             Complex(m.at("re2").get<double>(), m.at("im2").get<double>())));
    }
    return f;
}

ordered_json lineardata_json(const LinearData& d) {
    ordered_json out;
    out["c"] = d.c;
    out["c_star"] = d.c_star;
    out["omega_c"] = d.omega_c;
    out["mu"] = {d.mu(0).real(), d.mu(0).imag(), d.mu(1).real(), d.mu(1).imag()};
    out["normalizer"] = d.normalizer;
    out["transversality"] = d.transversality;
    out["lambda_plus_prime"] = d.lambda_plus_prime;
    out["breakdown"] = {{"z1", d.z1},
                        {"z2", {d.z2.real(), d.z2.imag()}},
                        {"v1", {d.v1.real(), d.v1.imag()}},
                        {"v2", d.v2}};
    out["nu0"] = field_json(d.nu0);
    out["nu1"] = field_json(d.nu1);
    out["nu2"] = field_json(d.nu2);
    return out;
}

ordered_json branch_point_json(const BranchPoint& pt) {
    ordered_json out;
    out["a"] = pt.a;
    out["omega"] = pt.omega;
    out["xi"] = pt.xi;
    out["gamma"] = pt.gamma;
    out["iterations"] = pt.iterations;
    out["converged"] = pt.converged;
    out["residuals"] = {{"phi_l2", pt.phi_residual},
                        {"kernel_orthogonality", pt.kernel_ortho_defect},
                        {"nu2_pairing", pt.nu2_pairing}};
    out["psi"] = field_json(pt.psi);
    return out;
}

ordered_json branch_json(const Branch& br) {
    ordered_json out;
    out["linear"] = lineardata_json(br.linear);
    out["truncated"] = br.truncated;
    out["sup_psi_h2"] = br.sup_psi_h2;
    out["sup_abs_xi"] = br.sup_abs_xi;
    out["psi_lipschitz"] = br.psi_lipschitz;
    out["xi_lipschitz"] = br.xi_lipschitz;
    ordered_json pts = ordered_json::array();
    for (const BranchPoint& pt : br.points) pts.push_back(branch_point_json(pt));
    out["points"] = std::move(pts);
    return out;
}

}  // namespace

std::string field_to_json(const PeriodicField& f) { return field_json(f).dump(2); }

PeriodicField field_from_json(const std::string& text) {
    try {
        return field_from(json::parse(text));
    } catch (const json::exception& e) {
        throw ConfigError(std::string("field JSON: ") + e.what());
    }
}

std::string lineardata_to_json(const LinearData& d) { return lineardata_json(d).dump(2); }

std::string branch_point_to_json(const BranchPoint& pt) { return branch_point_json(pt).dump(2); }

std::string branch_to_json(const Branch& br) { return branch_json(br).dump(2); }

std::string longwave_to_json(const std::vector<LongWaveBranch>& lw) {
    ordered_json arr = ordered_json::array();
    for (const LongWaveBranch& b : lw) {
        ordered_json e;
        e["epsilon"] = b.epsilon;
        e["freq_lipschitz"] = b.freq_lipschitz;
        ordered_json params = ordered_json::array();
        for (const LongWaveParams& p : b.params) {
            params.push_back({{"epsilon", p.epsilon},
                              {"alpha", p.alpha},
                              {"c", p.c},
                              {"a", p.a},
                              {"Omega", p.Omega},
                              {"profile_sup", p.profile_sup},
                              {"profile_deriv_sup", p.profile_deriv_sup}});
        }
        e["params"] = std::move(params);
        e["branch"] = branch_json(b.branch);
        arr.push_back(std::move(e));
    }
    return arr.dump(2);
}

std::string residual_report_to_json(const ResidualReport& r) {
    ordered_json out;
    out["phi_residual_l2"] = r.phi_residual_l2;
    out["derivative_orthogonality"] = r.derivative_orthogonality;
    out["nu0_orthogonality"] = r.nu0_orthogonality;
    out["jc_variation"] = r.jc_variation;
    out["lattice_residual_max"] = r.lattice_residual_max;
    return out.dump(2);
}

std::string verify_report_to_json(const std::vector<CriterionResult>& results) {
    ordered_json arr = ordered_json::array();
    bool all = true;
    for (const CriterionResult& r : results) {
        arr.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
        all = all && r.pass;
    }
    ordered_json out;
    out["all_pass"] = all;
    out["criteria"] = std::move(arr);
    return out.dump(2);
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<double>>& rows) {
    std::ostringstream os;
    for (size_t i = 0; i < header.size(); ++i) {
        if (i) os << ',';
        os << header[i];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (size_t i = 0; i < row.size(); ++i) {
            if (i) os << ',';
            os << format_double(row[i]);
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace dimerwave
