#include "opideal/serialize.hpp"

namespace opideal::serialize {

Json to_json(const BlockSequence& s) {
  Json runs = Json::array();
  for (size_t r = 0; r < s.run_count(); ++r) {
    runs.push_back(Json{{"mantissa", s.run(r).value.mantissa().get_str()},
                        {"exponent", s.run(r).value.exponent().get_str()},
                        {"length", s.run(r).length.get_str()}});
  }
  return Json{{"runs", runs}};
}

BlockSequence block_sequence_from_json(const Json& j) {
  std::vector<Run> runs;
  for (const Json& r : j.at("runs")) {
    runs.push_back(Run{
        Dyadic(BigInt(r.at("mantissa").get<std::string>()),
               BigInt(r.at("exponent").get<std::string>())),
        BigInt(r.at("length").get<std::string>())});
  }
  return BlockSequence::from_runs(std::move(runs));
}

Json to_json(const hornmat::Matrix& m) {
  Json rows = Json::array();
  for (long i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (long j = 0; j < m.cols(); ++j)
      row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
    rows.push_back(row);
  }
  return rows;
}

hornmat::Matrix matrix_from_json(const Json& j) {
  long n = static_cast<long>(j.size());
  if (n == 0) return hornmat::Matrix(0, 0);
  long c = static_cast<long>(j.at(0).size());
  hornmat::Matrix m(n, c);
  for (long i = 0; i < n; ++i)
    for (long k = 0; k < c; ++k)
      m(i, k) = hornmat::Complex(j.at(i).at(k).at(0).get<double>(),
                                 j.at(i).at(k).at(1).get<double>());
  return m;
}

std::string dyadic_string(const Dyadic& d) { return d.to_string(); }

Dyadic dyadic_from_string(const std::string& s) {
  if (s == "0") return Dyadic();
  auto pos = s.find("*2^");
  if (pos == std::string::npos) return Dyadic(BigInt(s), BigInt(0));
  return Dyadic(BigInt(s.substr(0, pos)), BigInt(s.substr(pos + 3)));
}

}  // namespace opideal::serialize
