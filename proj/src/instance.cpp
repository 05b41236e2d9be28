#include "mek/instance.hpp"

#include "mek/csv.hpp"

namespace mek {

namespace {

std::vector<std::string> tokenize(std::string_view line) {
  const size_t hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string> tokens;
  size_t k = 0;
  while (k < line.size()) {
    while (k < line.size() && (line[k] == ' ' || line[k] == '\t' ||
                               line[k] == '\r')) {
      ++k;
    }
    const size_t start = k;
    while (k < line.size() && line[k] != ' ' && line[k] != '\t' &&
           line[k] != '\r') {
      ++k;
    }
    if (k > start) tokens.emplace_back(line.substr(start, k - start));
  }
  return tokens;
}

[[noreturn]] void fail(const std::string& name, size_t line,
                       const std::string& msg) {
  throw ParseError(name + ":" + std::to_string(line) + ": " + msg);
}

double num_field(const std::string& name, size_t line,
                 const std::string& field) {
  try {
    return parse_double(field);
  } catch (const ParseError& e) {
    fail(name, line, e.what());
  }
}

long int_field(const std::string& name, size_t line,
               const std::string& field) {
  try {
    return parse_long(field);
  } catch (const ParseError& e) {
    fail(name, line, e.what());
  }
}

}  // namespace

InstanceFile parse_instance_text(const std::vector<std::string>& lines,
                                 const std::string& name) {
  std::optional<long> nx, ny;
  std::optional<Vec> source;
  std::optional<Mat> dmat;
  std::optional<AhlswedeInstance> ahl;
  std::optional<std::string> units;
  long pending_rows = 0;
  long row = 0;

  for (size_t ln = 1; ln <= lines.size(); ++ln) {
    const std::vector<std::string> tok = tokenize(lines[ln - 1]);
    if (tok.empty()) continue;

    if (pending_rows > 0) {
      if (static_cast<long>(tok.size()) != *ny) {
        throw DimensionMismatch(name + ":" + std::to_string(ln) +
                                ": distortion row needs " +
                                std::to_string(*ny) + " values, got " +
                                std::to_string(tok.size()));
      }
      for (long y = 0; y < *ny; ++y) {
        (*dmat)(row, y) = num_field(name, ln, tok[static_cast<size_t>(y)]);
      }
      ++row;
      --pending_rows;
      continue;
    }

    const std::string& kw = tok[0];
    if (kw == "alphabet") {
      if (tok.size() != 5 || tok[1] != "X" || tok[3] != "Y") {
        fail(name, ln, "expected 'alphabet X <int> Y <int>'");
      }
      if (nx) fail(name, ln, "duplicate alphabet line");
      nx = int_field(name, ln, tok[2]);
      ny = int_field(name, ln, tok[4]);
      if (*nx < 1 || *ny < 1) fail(name, ln, "alphabet sizes must be >= 1");
    } else if (kw == "source") {
      if (!nx) fail(name, ln, "alphabet must precede source");
      if (source) fail(name, ln, "duplicate source line");
      if (static_cast<long>(tok.size()) != *nx + 1) {
        throw DimensionMismatch(name + ":" + std::to_string(ln) +
                                ": source needs " + std::to_string(*nx) +
                                " values, got " +
                                std::to_string(tok.size() - 1));
      }
      Vec p(*nx);
      for (long x = 0; x < *nx; ++x) {
        p(x) = num_field(name, ln, tok[static_cast<size_t>(x) + 1]);
      }
      source = std::move(p);
    } else if (kw == "distortion") {
      if (tok.size() != 1) fail(name, ln, "unexpected values after keyword");
      if (!nx) fail(name, ln, "alphabet must precede distortion");
      if (dmat) fail(name, ln, "duplicate distortion block");
      dmat = Mat(*nx, *ny);
      pending_rows = *nx;
      row = 0;
    } else if (kw == "ahlswede") {
      if (tok.size() != 9 || tok[1] != "sizeA" || tok[3] != "sizeB" ||
          tok[5] != "xi" || tok[7] != "b") {
        fail(name, ln,
             "expected 'ahlswede sizeA <int> sizeB <int> xi <float> "
             "b <float>'");
      }
      if (ahl) fail(name, ln, "duplicate ahlswede line");
      ahl = build_instance(static_cast<int>(int_field(name, ln, tok[2])),
                           static_cast<int>(int_field(name, ln, tok[4])),
                           num_field(name, ln, tok[6]),
                           num_field(name, ln, tok[8]));
    } else if (kw == "units") {
      if (tok.size() != 2 || (tok[1] != "bits" && tok[1] != "nats")) {
        fail(name, ln, "expected 'units bits' or 'units nats'");
      }
      if (units) fail(name, ln, "duplicate units line");
      units = tok[1];
    } else {
      fail(name, ln, "unknown keyword '" + kw + "'");
    }
  }

  if (pending_rows > 0) {
    fail(name, lines.size(),
         "distortion block ends before " + std::to_string(*nx) + " rows");
  }

  InstanceFile out;
  out.units = units;
  if (ahl) {
    if (nx || source || dmat) {
      fail(name, lines.size(),
           "ahlswede generator excludes explicit alphabet/source/distortion");
    }
    out.source = ahl->source();
    out.d = ahl->d;
    out.ahlswede = std::move(ahl);
    return out;
  }
  if (!source || !dmat) {
    fail(name, lines.size(),
         "incomplete instance: need source and distortion");
  }
  out.source = validate_distribution(*source);
  out.d = validate_distortion(*dmat);
  return out;
}

InstanceFile parse_instance(const std::string& path) {
  return parse_instance_text(read_lines(path), path);
}

std::string serialize_instance(const InstanceFile& inst) {
  std::string out;
  if (inst.ahlswede) {
    const AhlswedeInstance& a = *inst.ahlswede;
    out += "ahlswede sizeA " + std::to_string(a.size_a) + " sizeB " +
           std::to_string(a.size_b) + " xi " + format_double_exact(a.xi) +
           " b " + format_double_exact(a.b) + "\n";
  } else {
    out += "alphabet X " + std::to_string(inst.source.size()) + " Y " +
           std::to_string(inst.d.cols()) + "\n";
    out += "source";
    for (Eigen::Index x = 0; x < inst.source.size(); ++x) {
      out += ' ';
      out += format_double_exact(inst.source(x));
    }
    out += "\ndistortion\n";
    for (Eigen::Index x = 0; x < inst.d.rows(); ++x) {
      for (Eigen::Index y = 0; y < inst.d.cols(); ++y) {
        if (y > 0) out += ' ';
        out += format_double_exact(inst.d.values(x, y));
      }
      out += '\n';
    }
  }
  if (inst.units) out += "units " + *inst.units + "\n";
  return out;
}

}  // namespace mek
