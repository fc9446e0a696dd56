#include "pmtomo/io.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "pmtomo/errors.hpp"

namespace pmtomo::io {

std::string format_number(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

json to_json(const MomentSequence& moments) {
    json j{{"K", moments.K()}, {"m", moments.m}};
    j["se"] = moments.has_errors() ? json(moments.se) : json(nullptr);
    return j;
}

void write_moments_csv(std::ostream& os, const MomentSequence& moments) {
    os << "k,m,se\n";
    for (int k = 0; k <= moments.K(); ++k) {
        os << k << ',' << format_number(moments.m[k]) << ',';
        if (moments.has_errors()) os << format_number(moments.se[k]);
        os << '\n';
    }
}

void write_moment_table_csv(std::ostream& os, const std::vector<std::string>& names,
                            const std::vector<std::vector<double>>& columns) {
    os << 'k';
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    std::size_t rows = 0;
    for (const auto& c : columns) rows = std::max(rows, c.size());
    for (std::size_t k = 0; k < rows; ++k) {
        os << k;
        for (const auto& c : columns) {
            os << ',';
            if (k < c.size()) os << format_number(c[k]);
        }
        os << '\n';
    }
}

void write_density_csv(std::ostream& os, const GridDensity& density) {
    write_densities_csv(os, density.grid, {"density"}, {density.values});
}

void write_densities_csv(std::ostream& os, const Grid& grid, const std::vector<std::string>& names,
                         const std::vector<std::vector<double>>& columns) {
    for (const auto& c : columns)
        if (c.size() != grid.points) throw InputError("density column does not match the grid");
    os << 'x';
    for (const auto& n : names) os << ',' << n;
    os << '\n';
    for (std::size_t i = 0; i < grid.points; ++i) {
        os << format_number(grid.at(i));
        for (const auto& c : columns) os << ',' << format_number(c[i]);
        os << '\n';
    }
}

json to_json(const DensityMatrix& rho) {
    json re = json::array(), im = json::array();
    for (std::size_t m = 0; m < rho.dim(); ++m) {
        json r = json::array(), i = json::array();
        for (std::size_t n = 0; n < rho.dim(); ++n) {
            r.push_back(rho(m, n).real());
            i.push_back(rho(m, n).imag());
        }
        re.push_back(std::move(r));
        im.push_back(std::move(i));
    }
    return {{"dim", rho.dim()}, {"real", std::move(re)}, {"imag", std::move(im)}};
}

DensityMatrix density_matrix_from_json(const json& j) {
    const auto dim = j.at("dim").get<std::size_t>();
    Eigen::MatrixXcd e(dim, dim);
    for (std::size_t m = 0; m < dim; ++m)
        for (std::size_t n = 0; n < dim; ++n)
            e(m, n) = Complex(j.at("real").at(m).at(n).get<double>(), j.at("imag").at(m).at(n).get<double>());
    return DensityMatrix(std::move(e));
}

json to_json(const DeterminacyVerdict& v) {
    return {{"bounded", v.bounded}, {"C", v.C}, {"R", v.R}, {"max_violation", v.max_violation}, {"method", v.method}};
}

json to_json(const HankelCheck& c) {
    return {{"positive_semidefinite", c.positive_semidefinite}, {"min_eigenvalue", c.min_eigenvalue}};
}

json to_json(const LemmaReport& r) {
    return {{"projective_marginal", r.projective_marginal},
            {"commute_residual", r.commute_residual},
            {"product_residual", r.product_residual},
            {"union_commute_residual", r.union_commute_residual},
            {"union_product_residual", r.union_product_residual},
            {"pass", r.pass}};
}

json to_json(const AdversarialReport& r, bool with_log) {
    json j{{"attempts", r.attempts},
           {"invalid_pom", r.invalid_pom},
           {"no_projective_marginal", r.no_projective_marginal},
           {"valid_product", r.valid_product},
           {"counterexamples", r.counterexamples}};
    if (with_log) {
        json log = json::array();
        for (const auto& a : r.log)
            log.push_back({{"index", a.index},
                           {"strategy", a.strategy},
                           {"outcome", to_string(a.outcome)},
                           {"product_residual", a.product_residual},
                           {"detail", a.detail}});
        j["log"] = std::move(log);
    }
    return j;
}

void write_polar_csv(std::ostream& os, const PolarGrid& q) {
    os << "r,theta,q\n";
    for (std::size_t i = 0; i < q.r.size(); ++i)
        for (std::size_t j = 0; j < q.theta.size(); ++j)
            os << format_number(q.r[i]) << ',' << format_number(q.theta[j]) << ','
               << format_number(q.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))) << '\n';
}

void write_json_file(const std::filesystem::path& path, const json& j) { write_text_file(path, j.dump(2) + "\n"); }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write " + path.string());
    out << text;
    if (!out) throw InputError("failed writing " + path.string());
}

} // namespace pmtomo::io
