// Copyright 2026 The vla Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "vla/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace vla::io {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& source, std::size_t line, const std::string& what) {
    throw FormatError(source + (line ? ":" + std::to_string(line) : std::string()) + ": " + what);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
}

bool blank(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); });
}

std::ifstream open(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError(path.string() + ": cannot open file");
    return in;
}

json parse_json(std::istream& in, const std::string& source) {
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw FormatError(source + ": " + e.what());
    }
}

PauliSum from_sparse(const SparseMatrix& m) { return canonicalize(decompose_elementwise(m.padded_to_register())); }

}  // namespace

SparseMatrix read_matrix_market(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 1;
    if (!std::getline(in, line)) fail(source, 0, "empty input");
    std::istringstream banner(line);
    std::string tag, object, layout, field, symmetry;
    banner >> tag >> object >> layout >> field >> symmetry;
    if (tag != "%%MatrixMarket") fail(source, lineno, "missing %%MatrixMarket banner");
    object = lower(object), layout = lower(layout), field = lower(field), symmetry = lower(symmetry);
    if (object != "matrix") fail(source, lineno, "unsupported object '" + object + "'");
    if (layout != "coordinate" && layout != "array") fail(source, lineno, "unsupported layout '" + layout + "'");
    if (field != "real" && field != "integer" && field != "complex" && field != "pattern" && field != "double") {
        fail(source, lineno, "unsupported field '" + field + "'");
    }
    if (symmetry != "general" && symmetry != "symmetric" && symmetry != "skew-symmetric" && symmetry != "hermitian") {
        fail(source, lineno, "unsupported symmetry '" + symmetry + "'");
    }
    if (layout == "array" && field == "pattern") fail(source, lineno, "pattern field needs coordinate layout");
    if (symmetry == "hermitian" && field != "complex") fail(source, lineno, "hermitian storage needs complex field");

    // Size line, skipping comments.
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line[0] == '%') continue;
        if (!blank(line)) break;
    }
    std::istringstream size_line(line);
    long long rows = 0, cols = 0, nnz = 0;
    size_line >> rows >> cols;
    if (layout == "coordinate") size_line >> nnz;
    if (!size_line || rows <= 0 || cols <= 0 || nnz < 0) fail(source, lineno, "bad size line '" + line + "'");
    if (rows != cols) fail(source, lineno, "matrix must be square, got " + std::to_string(rows) + "x" + std::to_string(cols));
    const auto n = static_cast<std::size_t>(rows);
    const bool cplx = field == "complex";

    std::map<std::pair<std::size_t, std::size_t>, Complex> acc;
    auto put = [&](std::size_t r, std::size_t c, Complex v) {
        acc[{r, c}] += v;
        if (r == c) return;
        if (symmetry == "symmetric") acc[{c, r}] += v;
        else if (symmetry == "skew-symmetric") acc[{c, r}] -= v;
        else if (symmetry == "hermitian") acc[{c, r}] += std::conj(v);
    };
    auto read_value = [&](std::istringstream& s) {
        double re = 1.0, im = 0.0;
        if (field != "pattern") s >> re;
        if (cplx) s >> im;
        if (!s) fail(source, lineno, "bad value in '" + line + "'");
        return Complex(re, im);
    };

    const std::size_t expected =
        layout == "coordinate" ? static_cast<std::size_t>(nnz)
                               : (symmetry == "general" ? n * n : (symmetry == "skew-symmetric" ? n * (n - 1) / 2 : n * (n + 1) / 2));
    std::size_t count = 0, col = 0, row = 0;
    if (layout == "array" && symmetry == "skew-symmetric") row = 1;
    while (count < expected && std::getline(in, line)) {
        ++lineno;
        if (blank(line) || line[0] == '%') continue;
        std::istringstream s(line);
        if (layout == "coordinate") {
            long long r = 0, c = 0;
            s >> r >> c;
            if (!s) fail(source, lineno, "bad entry '" + line + "'");
            if (r < 1 || c < 1 || r > rows || c > cols) fail(source, lineno, "index out of range in '" + line + "'");
            if (symmetry != "general" && c > r) fail(source, lineno, "entry above the diagonal in symmetric storage");
            if (symmetry == "skew-symmetric" && c == r) fail(source, lineno, "diagonal entry in skew-symmetric storage");
            put(static_cast<std::size_t>(r - 1), static_cast<std::size_t>(c - 1), read_value(s));
        } else {
            // Column-major; symmetric storage lists the lower triangle only.
            put(row, col, read_value(s));
            if (++row == n) {
                ++col;
                row = symmetry == "general" ? 0 : col + (symmetry == "skew-symmetric" ? 1 : 0);
            }
        }
        ++count;
    }
    if (count < expected) {
        fail(source, lineno, "expected " + std::to_string(expected) + " entries, found " + std::to_string(count));
    }
    std::vector<SparseMatrix::Entry> entries;
    for (const auto& [rc, v] : acc)
        if (v != Complex(0.0, 0.0)) entries.push_back({rc.first, rc.second, v});
    if (entries.empty()) fail(source, 0, "matrix has no nonzero entries");
    return SparseMatrix(n, std::move(entries));
}

void write_matrix_market(std::ostream& out, const SparseMatrix& m) {
    const auto old = out.precision(17);
    out << "%%MatrixMarket matrix coordinate complex general\n";
    out << m.dimension() << ' ' << m.dimension() << ' ' << m.entries().size() << '\n';
    for (const auto& e : m.entries()) {
        out << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value.real() << ' ' << e.value.imag() << '\n';
    }
    out.precision(old);
}

MatrixDocument read_matrix_json(std::istream& in, const std::string& source) {
    const json j = parse_json(in, source);
    if (!j.is_object()) fail(source, 0, "matrix document must be a JSON object");
    MatrixDocument doc;
    try {
        if (j.contains("allow_non_hermitian")) doc.metadata.allow_non_hermitian = j.at("allow_non_hermitian").get<bool>();
        if (j.contains("kappa")) doc.metadata.kappa = j.at("kappa").get<double>();
        if (j.contains("spectral_norm")) doc.metadata.spectral_norm = j.at("spectral_norm").get<double>();
        if (j.contains("pauli")) {
            const auto& terms = j.at("pauli");
            if (!terms.is_array() || terms.empty()) fail(source, 0, "\"pauli\" must be a nonempty array");
            const std::size_t n = terms.at(0).at(2).get<std::string>().size();
            PauliSum s(n);
            for (const auto& t : terms) {
                if (!t.is_array() || t.size() != 3) fail(source, 0, "pauli terms are [re, im, \"LETTERS\"]");
                s.add(Complex(t.at(0).get<double>(), t.at(1).get<double>()), t.at(2).get<std::string>());
            }
            doc.matrix = canonicalize(s);
            return doc;
        }
        if (!j.contains("n") || !j.contains("entries")) fail(source, 0, "expected \"n\" and \"entries\" (or \"pauli\")");
        const auto n = j.at("n").get<long long>();
        if (n <= 0) fail(source, 0, "\"n\" must be positive");
        std::map<std::pair<std::size_t, std::size_t>, Complex> acc;
        for (const auto& e : j.at("entries")) {
            if (!e.is_array() || (e.size() != 3 && e.size() != 4)) fail(source, 0, "entries are [row, col, re, im]");
            const auto r = e.at(0).get<long long>(), c = e.at(1).get<long long>();
            if (r < 0 || c < 0 || r >= n || c >= n) fail(source, 0, "entry index out of range");
            acc[{static_cast<std::size_t>(r), static_cast<std::size_t>(c)}] +=
                Complex(e.at(2).get<double>(), e.size() == 4 ? e.at(3).get<double>() : 0.0);
        }
        std::vector<SparseMatrix::Entry> entries;
        for (const auto& [rc, v] : acc)
            if (v != Complex(0.0, 0.0)) entries.push_back({rc.first, rc.second, v});
        if (entries.empty()) fail(source, 0, "matrix has no nonzero entries");
        doc.matrix = from_sparse(SparseMatrix(static_cast<std::size_t>(n), std::move(entries)));
    } catch (const json::exception& e) {
        fail(source, 0, e.what());
    } catch (const std::invalid_argument& e) {
        fail(source, 0, e.what());
    }
    return doc;
}

void write_matrix_json(std::ostream& out, const SparseMatrix& m, const ProblemMetadata& meta) {
    json j;
    j["n"] = m.dimension();
    j["entries"] = json::array();
    for (const auto& e : m.entries()) j["entries"].push_back({e.row, e.col, e.value.real(), e.value.imag()});
    if (meta.allow_non_hermitian) j["allow_non_hermitian"] = true;
    if (meta.kappa) j["kappa"] = *meta.kappa;
    if (meta.spectral_norm) j["spectral_norm"] = *meta.spectral_norm;
    out << j.dump(2) << '\n';
}

PauliSum read_pauli_text(std::istream& in, const std::string& source) {
    std::string line;
    std::size_t lineno = 0;
    std::optional<PauliSum> s;
    while (std::getline(in, line)) {
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        if (blank(line)) continue;
        std::istringstream t(line);
        double re = 0.0, im = 0.0;
        std::string letters, extra;
        t >> re >> im >> letters;
        if (!t || letters.empty()) fail(source, lineno, "expected 're im LETTERS', got '" + line + "'");
        if (t >> extra) fail(source, lineno, "trailing text '" + extra + "'");
        for (char& c : letters) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
        if (!s) s.emplace(letters.size());
        if (letters.size() != s->qubit_count()) fail(source, lineno, "term length differs from the first term");
        try {
            s->add(Complex(re, im), letters);
        } catch (const std::invalid_argument& e) {
            fail(source, lineno, e.what());
        }
    }
    if (!s) fail(source, 0, "no Pauli terms");
    return canonicalize(*s);
}

void write_pauli_text(std::ostream& out, const PauliSum& s) {
    const auto old = out.precision(17);
    for (const auto& t : s.terms()) out << t.coefficient.real() << ' ' << t.coefficient.imag() << ' ' << t.letters << '\n';
    out.precision(old);
}

MatrixDocument load_matrix(const std::filesystem::path& path) {
    auto in = open(path);
    const std::string ext = lower(path.extension().string());
    if (ext == ".mtx") return {from_sparse(read_matrix_market(in, path.string())), {}};
    if (ext == ".json") return read_matrix_json(in, path.string());
    return {read_pauli_text(in, path.string()), {}};
}

Circuit read_circuit_json(std::istream& in, const std::string& source) {
    const json j = parse_json(in, source);
    try {
        Circuit c(j.at("qubits").get<std::size_t>(), j.value("parameters", std::size_t{0}));
        for (const auto& g : j.at("gates")) {
            Gate gate;
            gate.kind = gate_kind_from_string(g.at("kind").get<std::string>());
            gate.target = g.at("target").get<std::size_t>();
            if (g.contains("control") && !g.at("control").is_null()) gate.control = g.at("control").get<std::size_t>();
            if (g.contains("slot") && !g.at("slot").is_null()) gate.slot = g.at("slot").get<std::size_t>();
            gate.angle = g.value("angle", 0.0);
            c.add(gate);
        }
        return c;
    } catch (const json::exception& e) {
        fail(source, 0, e.what());
    } catch (const std::invalid_argument& e) {
        fail(source, 0, e.what());
    } catch (const std::out_of_range& e) {
        fail(source, 0, e.what());
    }
}

Circuit load_circuit(const std::filesystem::path& path) {
    auto in = open(path);
    return read_circuit_json(in, path.string());
}

void write_circuit_json(std::ostream& out, const Circuit& c) {
    json j;
    j["qubits"] = c.qubit_count();
    j["parameters"] = c.parameter_count();
    j["gates"] = json::array();
    for (const auto& g : c.gates()) {
        json e;
        e["kind"] = to_string(g.kind);
        e["target"] = g.target;
        e["control"] = g.control ? json(*g.control) : json(nullptr);
        e["slot"] = g.slot ? json(*g.slot) : json(nullptr);
        if (g.is_rotation() && !g.slot) e["angle"] = g.angle;
        j["gates"].push_back(e);
    }
    out << j.dump(2) << '\n';
}

void write_state_csv(std::ostream& out, const StateVector& s) {
    const auto old = out.precision(17);
    out << "index,re,im\n";
    for (std::size_t i = 0; i < s.dimension(); ++i) out << i << ',' << s[i].real() << ',' << s[i].imag() << '\n';
    out.precision(old);
}

}  // namespace vla::io
