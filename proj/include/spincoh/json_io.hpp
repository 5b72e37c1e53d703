// JSON (de)serialization of the exact domain objects: scalars as
// "a/b+c/d*i" strings, multivectors as word->scalar objects, matrices as
// nested arrays of scalar strings. Round-trips are bit-exact.
#pragma once

#include <json.hpp>

#include "spincoh/cohomology.hpp"

namespace spincoh {

using json = nlohmann::json;

inline json to_json(const MultiVector& v) {
    json terms = json::object();
    for (const auto& [w, c] : v.terms()) terms[MultiVector::word_key(w)] = c.str();
    return json{{"n", v.ground_dim()}, {"terms", terms}};
}

inline MultiVector multivector_from_json(const json& j) {
    if (!j.contains("n") || !j.contains("terms"))
        throw std::invalid_argument("multivector: expected {n, terms}");
    MultiVector v(j.at("n").get<int>());
    for (const auto& [key, val] : j.at("terms").items())
        v.add_term(MultiVector::parse_word_key(key, v.ground_dim()),
                   Qi::parse(val.get<std::string>()));
    return v;
}

inline json to_json(const QiMatrix& m) {
    json rows = json::array();
    for (int r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c).str());
        rows.push_back(row);
    }
    return rows;
}

inline QiMatrix matrix_from_json(const json& j) {
    int rows = static_cast<int>(j.size());
    int cols = rows > 0 ? static_cast<int>(j.at(0).size()) : 0;
    QiMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j.at(r).size()) != cols)
            throw std::invalid_argument("matrix: ragged rows");
        for (int c = 0; c < cols; ++c) m.at(r, c) = Qi::parse(j.at(r).at(c).get<std::string>());
    }
    return m;
}

// Curvature input: either a rank-4 "riemann" array (with antisymmetry and
// optional first-Bianchi validation) or per-pair spin coefficients.
inline CurvatureData curvature_from_json(const SpinRep& rep, const json& j) {
    int n = rep.n();
    if (j.contains("riemann")) {
        const json& arr = j.at("riemann");
        std::vector riem(n, std::vector(n, std::vector(n, std::vector<Qi>(n, Qi(0)))));
        if (static_cast<int>(arr.size()) != n)
            throw std::invalid_argument("curvature: riemann array must be n^4");
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                for (int c = 0; c < n; ++c)
                    for (int d = 0; d < n; ++d)
                        riem[a][b][c][d] = Qi::parse(arr.at(a).at(b).at(c).at(d).get<std::string>());
        bool bianchi = j.value("require_first_bianchi", false);
        return CurvatureData::from_riemann(rep, riem, bianchi);
    }
    if (j.contains("spin_coeffs")) {
        CurvatureData out(rep);
        for (const auto& [key, val] : j.at("spin_coeffs").items()) {
            auto comma = key.find(',');
            if (comma == std::string::npos)
                throw std::invalid_argument("curvature: spin_coeffs keys are 'mu,nu'");
            int mu = std::stoi(key.substr(0, comma));
            int nu = std::stoi(key.substr(comma + 1));
            if (mu < 1 || nu < 1 || mu > n || nu > n || mu == nu)
                throw std::invalid_argument("curvature: bad index pair " + key);
            QiMatrix r(rep.dim_delta(), rep.dim_delta());
            for (const auto& [pk, pv] : val.items()) {
                auto c2 = pk.find(',');
                int rho = std::stoi(pk.substr(0, c2));
                int sig = std::stoi(pk.substr(c2 + 1));
                r += Qi::parse(pv.get<std::string>()) * rep.gamma_antisym({rho, sig}).dense();
            }
            if (mu < nu) out.set_block(mu, nu, r);
            else out.set_block(nu, mu, -r);
        }
        if (!out.in_spin_span(rep))
            throw std::invalid_argument("curvature: R_{mu nu} not in the spin(n) span");
        return out;
    }
    throw std::invalid_argument("curvature: expected 'riemann' or 'spin_coeffs'");
}

inline HodgeDiamond diamond_from_json(const json& j) {
    HodgeDiamond h;
    h.h11 = j.value("h11", 0);
    h.h21 = j.value("h21", 0);
    h.h01 = j.value("h01", 0);
    h.h02 = j.value("h02", 0);
    if (j.contains("h30") && j.at("h30").get<int>() != 1)
        throw std::invalid_argument("hodge diamond: h30 must be 1");
    if (j.contains("h00") && j.at("h00").get<int>() != 1)
        throw std::invalid_argument("hodge diamond: h00 must be 1");
    h.validate();
    return h;
}

}  // namespace spincoh
