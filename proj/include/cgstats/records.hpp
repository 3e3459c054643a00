#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <gmpxx.h>
#include <json.hpp>

namespace cgstats {

// One number field: |disc| and the elementary divisors of (a quotient of)
// its class group, largest first, every divisor >= 2.  The trivial group is
// the empty list.
struct ClassGroupRecord {
  mpz_class disc;
  std::vector<mpz_class> invariants;
  std::string field_label;
};

enum class RecordFormat { Jsonl, Csv };

inline RecordFormat parse_record_format(const std::string& s) {
  if (s == "jsonl") return RecordFormat::Jsonl;
  if (s == "csv") return RecordFormat::Csv;
  throw std::invalid_argument("unknown record format '" + s + "'");
}

struct ingest_error : std::runtime_error {
  size_t line;
  ingest_error(size_t ln, const std::string& msg)
      : std::runtime_error("line " + std::to_string(ln) + ": " + msg), line(ln) {}
};

struct IngestOptions {
  RecordFormat format = RecordFormat::Jsonl;
  bool strict = true;  // false: skip bad lines, collect warnings
};

struct IngestResult {
  std::vector<ClassGroupRecord> records;
  std::vector<std::string> warnings;
};

namespace detail {

inline mpz_class parse_mpz(const std::string& s, size_t line) {
  if (s.empty()) throw ingest_error(line, "empty integer");
  for (size_t i = 0; i < s.size(); ++i)
    if (!std::isdigit((unsigned char)s[i]) && !(i == 0 && s[i] == '-'))
      throw ingest_error(line, "bad integer '" + s + "'");
  return mpz_class(s, 10);
}

inline void validate_record(ClassGroupRecord& r, size_t line) {
  if (r.disc < 0) throw ingest_error(line, "negative discriminant norm");
  for (size_t i = 0; i < r.invariants.size(); ++i) {
    if (r.invariants[i] < 2)
      throw ingest_error(line, "elementary divisor must be >= 2");
    if (i > 0 && r.invariants[i] > r.invariants[i - 1])
      throw ingest_error(line, "elementary divisors must be non-increasing");
  }
}

inline ClassGroupRecord record_from_json(const std::string& text, size_t line) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ingest_error(line, std::string("bad json: ") + e.what());
  }
  if (!j.is_object() || !j.contains("disc") || !j.contains("clgrp"))
    throw ingest_error(line, "record needs 'disc' and 'clgrp'");
  ClassGroupRecord r;
  const auto& jd = j["disc"];
  if (jd.is_string())
    r.disc = parse_mpz(jd.get<std::string>(), line);
  else if (jd.is_number_unsigned())
    r.disc = mpz_class(std::to_string(jd.get<uint64_t>()));
  else
    throw ingest_error(line, "'disc' must be a decimal string or unsigned integer");
  const auto& jc = j["clgrp"];
  if (!jc.is_array()) throw ingest_error(line, "'clgrp' must be an array");
  for (const auto& e : jc) {
    if (e.is_string())
      r.invariants.push_back(parse_mpz(e.get<std::string>(), line));
    else if (e.is_number_unsigned())
      r.invariants.push_back(mpz_class(std::to_string(e.get<uint64_t>())));
    else
      throw ingest_error(line, "class-group entries must be integers or strings");
  }
  if (j.contains("field") && j["field"].is_string())
    r.field_label = j["field"].get<std::string>();
  validate_record(r, line);
  return r;
}

inline ClassGroupRecord record_from_csv(const std::string& text, size_t line) {
  // disc,inv1|inv2|...[,label]
  size_t c1 = text.find(',');
  if (c1 == std::string::npos) throw ingest_error(line, "expected 'disc,invariants'");
  size_t c2 = text.find(',', c1 + 1);
  ClassGroupRecord r;
  r.disc = parse_mpz(text.substr(0, c1), line);
  std::string invs = text.substr(
      c1 + 1, c2 == std::string::npos ? std::string::npos : c2 - c1 - 1);
  if (!invs.empty()) {
    size_t pos = 0;
    while (true) {
      size_t bar = invs.find('|', pos);
      r.invariants.push_back(parse_mpz(
          invs.substr(pos, bar == std::string::npos ? std::string::npos : bar - pos),
          line));
      if (bar == std::string::npos) break;
      pos = bar + 1;
    }
  }
  if (c2 != std::string::npos) r.field_label = text.substr(c2 + 1);
  validate_record(r, line);
  return r;
}

}  // namespace detail

inline IngestResult ingest(std::istream& in, const IngestOptions& opt = {}) {
  IngestResult out;
  std::string line;
  size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string stripped = line;
    size_t b = stripped.find_first_not_of(" \t");
    if (b == std::string::npos) continue;  // blank
    stripped = stripped.substr(b);
    if (stripped[0] == '#') continue;  // comment
    if (opt.format == RecordFormat::Csv && first) {
      first = false;
      // header line: first field is not a number
      size_t c = stripped.find(',');
      std::string head = stripped.substr(0, c);
      if (!head.empty() && !std::isdigit((unsigned char)head[0]) && head[0] != '-')
        continue;
    }
    first = false;
    try {
      out.records.push_back(opt.format == RecordFormat::Jsonl
                                ? detail::record_from_json(stripped, lineno)
                                : detail::record_from_csv(stripped, lineno));
    } catch (const ingest_error& e) {
      if (opt.strict) throw;
      out.warnings.push_back(e.what());
    }
  }
  return out;
}

// Canonical serialization; ingest(write(x)) == x.
inline void write_jsonl(std::ostream& os, const std::vector<ClassGroupRecord>& rs) {
  for (const auto& r : rs) {
    os << "{\"disc\":\"" << r.disc.get_str() << "\",\"clgrp\":[";
    for (size_t i = 0; i < r.invariants.size(); ++i) {
      if (i) os << ',';
      if (r.invariants[i].fits_ulong_p())
        os << r.invariants[i].get_str();
      else
        os << '"' << r.invariants[i].get_str() << '"';  // too big for a json number
    }
    os << ']';
    if (!r.field_label.empty())
      os << ",\"field\":" << nlohmann::json(r.field_label).dump();
    os << "}\n";
  }
}

inline void write_csv(std::ostream& os, const std::vector<ClassGroupRecord>& rs) {
  os << "disc,invariants,field\n";
  for (const auto& r : rs) {
    os << r.disc.get_str() << ',';
    for (size_t i = 0; i < r.invariants.size(); ++i) {
      if (i) os << '|';
      os << r.invariants[i].get_str();
    }
    os << ',' << r.field_label << "\n";
  }
}

}  // namespace cgstats
