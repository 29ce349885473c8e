#ifndef DLOEWNER_MODEL_IO_HPP
#define DLOEWNER_MODEL_IO_HPP

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "error.hpp"
#include "matrix_market.hpp"
#include "model.hpp"
#include "oracle.hpp"
#include "types.hpp"

namespace dloewner
{

namespace fs = std::filesystem;

/// Complex numbers in JSON: a bare number or a [re, im] pair.
inline Complex complex_from_json(const nlohmann::json& j)
{
    if (j.is_number())
        return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return {j[0].get<double>(), j[1].get<double>()};
    throw PreconditionError("expected a number or [re, im] pair, got " + j.dump());
}

inline nlohmann::json complex_to_json(Complex z)
{
    return nlohmann::json::array({z.real(), z.imag()});
}

/// Matrices in JSON: array of rows of complex entries.
inline ComplexMatrix matrix_from_json(const nlohmann::json& j)
{
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw PreconditionError("expected a matrix as an array of rows");
    const auto rows = static_cast<Index>(j.size());
    const auto cols = static_cast<Index>(j[0].size());
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i)
    {
        const auto& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw PreconditionError("matrix rows have different lengths");
        for (Index k = 0; k < cols; ++k)
            m(i, k) = complex_from_json(row[static_cast<std::size_t>(k)]);
    }
    return m;
}

inline nlohmann::json matrix_to_json(const ComplexMatrix& m)
{
    nlohmann::json rows = nlohmann::json::array();
    for (Index i = 0; i < m.rows(); ++i)
    {
        nlohmann::json row = nlohmann::json::array();
        for (Index k = 0; k < m.cols(); ++k)
            row.push_back(complex_to_json(m(i, k)));
        rows.push_back(std::move(row));
    }
    return rows;
}

///
/// A model directory holds E.mtx, A.mtx, B.mtx, C.mtx (Matrix Market) and
/// model.json with {"tau": <float>, "metadata": {...}}. E.mtx may be
/// omitted (identity) and so may model.json (tau = 0).
///
inline void write_model(const fs::path& dir, const DelayDescriptorModel& model,
                        const nlohmann::json& metadata = nlohmann::json::object())
{
    model.validate();
    fs::create_directories(dir);
    write_matrix_market((dir / "E.mtx").string(), model.E);
    write_matrix_market((dir / "A.mtx").string(), model.A);
    write_matrix_market((dir / "B.mtx").string(), model.B);
    write_matrix_market((dir / "C.mtx").string(), model.C);
    nlohmann::json side = {{"tau", model.tau}};
    if (!metadata.is_null() && !metadata.empty())
        side["metadata"] = metadata;
    std::ofstream out(dir / "model.json");
    if (!out)
        throw PreconditionError("cannot write " + (dir / "model.json").string());
    out << side.dump(2) << '\n';
}

inline nlohmann::json read_model_sidecar(const fs::path& dir)
{
    const fs::path p = dir / "model.json";
    if (!fs::exists(p))
        return nlohmann::json::object();
    std::ifstream in(p);
    try
    {
        return nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw PreconditionError("malformed " + p.string() + ": " + e.what());
    }
}

inline DelayDescriptorModel read_model(const fs::path& dir)
{
    if (!fs::is_directory(dir))
        throw PreconditionError("model directory not found: " + dir.string());
    ComplexMatrix A = read_matrix_market((dir / "A.mtx").string());
    ComplexMatrix B = read_matrix_market((dir / "B.mtx").string());
    ComplexMatrix C = read_matrix_market((dir / "C.mtx").string());
    ComplexMatrix E = fs::exists(dir / "E.mtx") ? read_matrix_market((dir / "E.mtx").string())
                                                : ComplexMatrix::Identity(A.rows(), A.cols());
    const nlohmann::json side = read_model_sidecar(dir);
    double tau = 0.0;
    if (side.contains("tau"))
    {
        if (!side["tau"].is_number())
            throw PreconditionError("\"tau\" in model.json must be a number");
        tau = side["tau"].get<double>();
    }
    return DelayDescriptorModel(std::move(E), std::move(A), std::move(B), std::move(C), tau);
}

///
/// Samples file (JSON):
///   {"points": [s, ...], "values": [M, ...], "derivatives": [M, ...]}
/// with complex numbers as above and matrices as arrays of rows;
/// "derivatives" is optional.
///
inline SystemOracle read_samples(const fs::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw PreconditionError("cannot open samples file " + path.string());
    nlohmann::json j;
    try
    {
        j = nlohmann::json::parse(in);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw PreconditionError("malformed samples file: " + std::string(e.what()));
    }
    if (!j.contains("points") || !j.contains("values"))
        throw PreconditionError("samples file needs \"points\" and \"values\"");
    std::vector<Complex> points;
    for (const auto& p : j["points"])
        points.push_back(complex_from_json(p));
    std::vector<ComplexMatrix> values;
    for (const auto& v : j["values"])
        values.push_back(matrix_from_json(v));
    std::optional<std::vector<ComplexMatrix>> derivatives;
    if (j.contains("derivatives") && !j["derivatives"].is_null())
    {
        derivatives.emplace();
        for (const auto& v : j["derivatives"])
            derivatives->push_back(matrix_from_json(v));
    }
    return from_samples(std::move(points), std::move(values), std::move(derivatives));
}

inline void write_samples(const fs::path& path, const std::vector<Complex>& points,
                          const std::vector<ComplexMatrix>& values,
                          const std::vector<ComplexMatrix>* derivatives = nullptr)
{
    nlohmann::json j;
    j["points"] = nlohmann::json::array();
    for (Complex p : points)
        j["points"].push_back(complex_to_json(p));
    j["values"] = nlohmann::json::array();
    for (const auto& v : values)
        j["values"].push_back(matrix_to_json(v));
    if (derivatives)
    {
        j["derivatives"] = nlohmann::json::array();
        for (const auto& v : *derivatives)
            j["derivatives"].push_back(matrix_to_json(v));
    }
    std::ofstream out(path);
    if (!out)
        throw PreconditionError("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

/// Same matrices with the delay set. Refuses models that already carry one.
inline DelayDescriptorModel inject_delay(const DelayDescriptorModel& model, double tau)
{
    if (model.tau > 0.0)
        throw PreconditionError("model already has a delay; refusing to overwrite it");
    return model.with_delay(tau);
}

} // namespace dloewner

#endif /* DLOEWNER_MODEL_IO_HPP */
