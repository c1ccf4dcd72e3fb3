#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "critspace/tensor.hpp"

namespace critspace {

/// Contents of a tensor file {"dims": [...], "entries": [...]}, entries in
/// row-major order (last index fastest), each a number or a [re, im] pair.
struct TensorFile {
    Format format;
    std::vector<std::complex<double>> entries;
    std::vector<std::int64_t> int_entries;  // filled when integral
    bool integral = true;  // every entry a JSON integer
    bool real = true;      // no entry with a nonzero imaginary part

    IntTensor to_int() const;
    RealTensor to_real() const;
    ComplexTensor to_complex() const;
};

TensorFile parse_tensor_json(const std::string& text);
TensorFile read_tensor_file(const std::string& path);

std::string tensor_to_json(const IntTensor& t);
std::string tensor_to_json(const ComplexTensor& t);

}  // namespace critspace
