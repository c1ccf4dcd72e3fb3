#include "critspace/tensor_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "critspace/errors.hpp"

namespace critspace {

using nlohmann::json;

IntTensor TensorFile::to_int() const
{
    if (!integral)
        throw InputError("tensor entries must be integers here");
    return IntTensor(format, int_entries);
}

RealTensor TensorFile::to_real() const
{
    if (!real)
        throw InputError("tensor entries must be real here");
    std::vector<double> e;
    e.reserve(entries.size());
    for (const auto& v : entries)
        e.push_back(v.real());
    return RealTensor(format, std::move(e));
}

ComplexTensor TensorFile::to_complex() const { return ComplexTensor(format, entries); }

TensorFile parse_tensor_json(const std::string& text)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw InputError(std::string("tensor file is not valid JSON: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dims") || !doc.contains("entries"))
        throw InputError("tensor file needs \"dims\" and \"entries\"");
    const json& dims = doc["dims"];
    const json& entries = doc["entries"];
    if (!dims.is_array() || !entries.is_array())
        throw InputError("\"dims\" and \"entries\" must be arrays");
    std::vector<int> d;
    for (const auto& v : dims) {
        if (!v.is_number_integer())
            throw InputError("\"dims\" must hold integers");
        d.push_back(v.get<int>());
    }
    TensorFile out;
    try {
        out.format = Format(d);
    } catch (const std::invalid_argument& e) {
        throw InputError(e.what());
    }
    if (static_cast<std::int64_t>(entries.size()) != out.format.entry_count())
        throw InputError("expected " + std::to_string(out.format.entry_count()) + " entries, found " +
                         std::to_string(entries.size()));
    for (const auto& v : entries) {
        if (v.is_number()) {
            out.entries.emplace_back(v.get<double>(), 0.0);
            if (v.is_number_integer() && out.integral) {
                if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX))
                    throw InputError("integer entry exceeds 64 bits");
                out.int_entries.push_back(v.get<std::int64_t>());
            } else {
                out.integral = false;
            }
        } else if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number()) {
            const double im = v[1].get<double>();
            out.entries.emplace_back(v[0].get<double>(), im);
            out.integral = false;
            if (im != 0.0)
                out.real = false;
        } else {
            throw InputError("each entry must be a number or a [re, im] pair");
        }
    }
    if (!out.integral)
        out.int_entries.clear();
    return out;
}

TensorFile read_tensor_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw InputError("cannot open tensor file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_tensor_json(ss.str());
}

std::string tensor_to_json(const IntTensor& t)
{
    json doc;
    doc["dims"] = t.format().dims();
    doc["entries"] = t.entries();
    return doc.dump();
}

std::string tensor_to_json(const ComplexTensor& t)
{
    json doc;
    doc["dims"] = t.format().dims();
    json e = json::array();
    for (const auto& v : t.entries()) {
        if (v.imag() == 0.0)
            e.push_back(v.real());
        else
            e.push_back(json::array({v.real(), v.imag()}));
    }
    doc["entries"] = std::move(e);
    return doc.dump();
}

}  // namespace critspace
