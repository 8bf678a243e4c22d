// SPDX-License-Identifier: Apache-2.0

#include "twoweight/weight_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <json.hpp>
#include "twoweight/error.hpp"

namespace twoweight
{

namespace
{

using json = nlohmann::json;

Matrix parse_matrix(const json &entry, int k)
{
  if (!entry.contains("re"))
  {
    throw ValidationError("matrix entry needs a \"re\" field");
  }
  const auto &re = entry.at("re");
  const json im = entry.contains("im") ? entry.at("im") : json();
  if (!re.is_array() || static_cast<int>(re.size()) != k)
  {
    throw ValidationError("matrix \"re\" must be a " + std::to_string(k) + "x" +
                          std::to_string(k) + " array");
  }
  if (!im.is_null() && (!im.is_array() || static_cast<int>(im.size()) != k))
  {
    throw ValidationError("matrix \"im\" must match \"re\" in shape");
  }
  Matrix m(k, k);
  for (int i = 0; i < k; i++)
  {
    if (!re[i].is_array() || static_cast<int>(re[i].size()) != k ||
        (!im.is_null() && (!im[i].is_array() || static_cast<int>(im[i].size()) != k)))
    {
      throw ValidationError("matrix rows must have length " + std::to_string(k));
    }
    for (int j = 0; j < k; j++)
    {
      const double a = re[i][j].get<double>();
      const double b = im.is_null() ? 0.0 : im[i][j].get<double>();
      if (!std::isfinite(a) || !std::isfinite(b))
      {
        throw ValidationError("matrix entries must be finite");
      }
      m(i, j) = Complex(a, b);
    }
  }
  return m;
}

json matrix_to_json(const Matrix &m)
{
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); i++)
  {
    json rr = json::array(), ir = json::array();
    for (Eigen::Index j = 0; j < m.cols(); j++)
    {
      rr.push_back(m(i, j).real());
      ir.push_back(m(i, j).imag());
    }
    re.push_back(rr);
    im.push_back(ir);
  }
  return json{{"re", re}, {"im", im}};
}

struct Header
{
  int dim;
  double p;
  std::string kind;
};

Header parse_header(const json &doc)
{
  if (!doc.is_object())
  {
    throw ValidationError("weight spec must be a JSON object");
  }
  for (const char *key : {"dim", "kind", "data"})
  {
    if (!doc.contains(key))
    {
      throw ValidationError(std::string("weight spec is missing \"") + key + "\"");
    }
  }
  Header h{doc.at("dim").get<int>(), doc.value("schatten_p", 1.0),
           doc.at("kind").get<std::string>()};
  if (h.dim < 1)
  {
    throw ValidationError("\"dim\" must be at least 1");
  }
  if (!doc.at("data").is_array())
  {
    throw ValidationError("\"data\" must be an array");
  }
  return h;
}

std::vector<Matrix> parse_fourier_data(const json &data, int k)
{
  int max_n = -1;
  for (const auto &entry : data)
  {
    const int n = entry.at("n").get<int>();
    if (n < 0)
    {
      throw ValidationError("Fourier data lists n >= 0 only");
    }
    max_n = std::max(max_n, n);
  }
  if (max_n < 0)
  {
    throw ValidationError("Fourier data is empty");
  }
  std::vector<Matrix> coeff(static_cast<std::size_t>(max_n) + 1, Matrix::Zero(k, k));
  std::vector<bool> seen(coeff.size(), false);
  for (const auto &entry : data)
  {
    const auto n = static_cast<std::size_t>(entry.at("n").get<int>());
    if (seen[n])
    {
      throw ValidationError("duplicate Fourier index " + std::to_string(n));
    }
    seen[n] = true;
    coeff[n] = parse_matrix(entry, k);
  }
  return coeff;
}

MatrixSampleField parse_sample_data(const json &data, int k)
{
  const int m_size = static_cast<int>(data.size());
  MatrixSampleField field{CircleGrid(m_size), {}};
  field.values.reserve(data.size());
  for (const auto &entry : data)
  {
    field.values.push_back(parse_matrix(entry, k));
  }
  return field;
}

template <typename F>
auto with_json_errors(F &&f) -> decltype(f())
{
  try
  {
    return f();
  }
  catch (const json::exception &e)
  {
    throw ValidationError(std::string("malformed weight spec: ") + e.what());
  }
}

}  // namespace

MatrixWeight parse_weight_spec(const std::string &text, int grid_size)
{
  return with_json_errors(
      [&]()
      {
        const json doc = json::parse(text);
        const Header h = parse_header(doc);
        if (h.kind == "fourier")
        {
          auto coeff = parse_fourier_data(doc.at("data"), h.dim);
          const int degree = static_cast<int>(coeff.size()) - 1;
          const int m = grid_size > 0 ? std::max(grid_size, MatrixWeight::minimal_grid_size(degree))
                                      : 0;
          return MatrixWeight::from_fourier(std::move(coeff), h.p, m);
        }
        if (h.kind == "samples")
        {
          MatrixWeight w = MatrixWeight::from_samples(parse_sample_data(doc.at("data"), h.dim), h.p);
          return grid_size > 0 ? w.on_grid(grid_size) : w;
        }
        throw ValidationError("unknown weight kind '" + h.kind + "'");
      });
}

MatrixWeight load_weight_spec(const std::string &path, int grid_size)
{
  return parse_weight_spec(read_text_file(path), grid_size);
}

ScalarWeight parse_scalar_weight_spec(const std::string &text, int grid_size)
{
  return with_json_errors(
      [&]()
      {
        const json doc = json::parse(text);
        const Header h = parse_header(doc);
        if (h.dim != 1)
        {
          throw ValidationError("scalar weight spec must have dim 1");
        }
        const CircleGrid grid(grid_size);
        ScalarWeight v{grid, {}};
        if (h.kind == "reciprocal_fourier" || h.kind == "fourier")
        {
          // Sampled directly rather than through MatrixWeight so that zeros of
          // the reciprocal stay exact.
          const auto coeff = parse_fourier_data(doc.at("data"), 1);
          const bool reciprocal = h.kind == "reciprocal_fourier";
          for (int m = 0; m < grid.size(); m++)
          {
            double q = coeff.front()(0, 0).real();
            for (std::size_t n = 1; n < coeff.size(); n++)
            {
              q += 2.0 * (coeff[n](0, 0) * std::polar(1.0, static_cast<double>(n) * grid.node(m)))
                             .real();
            }
            if (!reciprocal)
            {
              v.values.push_back(q);
              continue;
            }
            if (q < -1e-12)
            {
              throw ValidationError("reciprocal of v0 is negative on a grid point");
            }
            v.values.push_back(q > 0.0 ? 1.0 / q : std::numeric_limits<double>::infinity());
          }
        }
        else if (h.kind == "samples")
        {
          const MatrixSampleField field = parse_sample_data(doc.at("data"), 1);
          if (field.grid.size() != grid_size)
          {
            throw ValidationError("scalar sample count must equal the grid size");
          }
          for (const auto &s : field.values)
          {
            if (std::abs(s(0, 0).imag()) > 1e-12)
            {
              throw ValidationError("scalar weight samples must be real");
            }
            v.values.push_back(s(0, 0).real());
          }
        }
        else
        {
          throw ValidationError("unknown scalar weight kind '" + h.kind + "'");
        }
        v.validate();
        return v;
      });
}

ScalarWeight load_scalar_weight_spec(const std::string &path, int grid_size)
{
  return parse_scalar_weight_spec(read_text_file(path), grid_size);
}

std::string dump_weight_spec(const MatrixWeight &w)
{
  json doc;
  doc["dim"] = w.dim();
  doc["schatten_p"] = w.schatten_p();
  json data = json::array();
  if (w.is_fourier())
  {
    doc["kind"] = "fourier";
    for (std::size_t n = 0; n < w.coefficients().size(); n++)
    {
      json entry = matrix_to_json(w.coefficients()[n]);
      entry["n"] = n;
      data.push_back(entry);
    }
  }
  else
  {
    doc["kind"] = "samples";
    for (const auto &s : w.samples())
    {
      data.push_back(matrix_to_json(s));
    }
  }
  doc["data"] = data;
  return doc.dump(2) + "\n";
}

std::string read_text_file(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ValidationError("cannot open '" + path + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file_atomic(const std::string &path, const std::string &contents)
{
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out)
    {
      throw ValidationError("cannot write '" + tmp + "'");
    }
    out << contents;
    if (!out.flush())
    {
      throw ValidationError("write to '" + tmp + "' failed");
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
  {
    std::remove(tmp.c_str());
    throw ValidationError("cannot rename '" + tmp + "' to '" + path + "'");
  }
}

std::string content_hash(const std::string &bytes)
{
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes)
  {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace twoweight
