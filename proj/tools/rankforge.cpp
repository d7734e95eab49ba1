// Command line front end.
//
// Every command reads one matrix (split reads a vector as well), picks a
// scalar regime, runs a factorization or proof route, writes factors as
// Matrix Market array files, and reports what it verified.  Exit codes:
// 0 all checks pass, 1 a verification check failed, 2 usage or shape
// errors, 3 unparseable input.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rankforge/rankforge.hpp"

using namespace rankforge;
using nlohmann::json;

namespace {

struct Options {
  std::string command;
  std::string input;
  std::string x_file;
  std::string mode;  // "", "exact", "float"
  std::optional<double> tol;
  std::string format;  // "", "mm", "csv"
  std::string out;
  bool json_output = false;
};

std::optional<FileFormat> flag_format(const std::string& flag) {
  if (flag == "mm") return FileFormat::matrix_market;
  if (flag == "csv") return FileFormat::csv;
  return std::nullopt;
}

std::string default_base(const std::string& path) {
  const std::string lower = detail::lowercase(path);
  for (const char* ext : {".csv", ".mtx", ".mm"})
    if (detail::ends_with(lower, ext))
      return path.substr(0, path.size() - std::string(ext).size());
  return path;
}

json residuals_json(const std::vector<NamedResidual>& residuals) {
  json arr = json::array();
  for (const auto& r : residuals)
    arr.push_back({{"name", r.name}, {"value", r.value}});
  return arr;
}

json report_json(const VerificationReport& rep) {
  json entries = json::array();
  for (const auto& e : rep.entries)
    entries.push_back({{"route", route_name(e.route)},
                       {"row_rank", e.row_rank},
                       {"col_rank", e.col_rank},
                       {"pass", e.pass},
                       {"residuals", residuals_json(e.residuals)},
                       {"timing_ms", e.timing_ms}});
  json checks = json::object();
  for (const auto& [name, check] : rep.factor_checks)
    checks[name] = {{"pass", check.pass},
                    {"residuals", residuals_json(check.residuals)}};
  return {{"input_digest", rep.input_digest},
          {"mode", rep.mode},
          {"rows", rep.rows},
          {"cols", rep.cols},
          {"entries", entries},
          {"factor_checks", checks},
          {"overall", rep.overall}};
}

void print_report_text(std::ostream& out, const VerificationReport& rep) {
  out << "input " << rep.rows << "x" << rep.cols << " mode " << rep.mode
      << " digest " << rep.input_digest << "\n";
  for (const auto& e : rep.entries) {
    out << "route " << route_name(e.route) << " row_rank " << e.row_rank
        << " col_rank " << e.col_rank << (e.pass ? " pass" : " FAIL");
    for (const auto& r : e.residuals)
      out << " " << r.name << "=" << r.value;
    out << "\n";
  }
  for (const auto& [name, check] : rep.factor_checks) {
    out << "factor " << name << (check.pass ? " pass" : " FAIL");
    for (const auto& r : check.residuals)
      out << " " << r.name << "=" << r.value;
    out << "\n";
  }
  out << "overall " << (rep.overall ? "pass" : "FAIL") << "\n";
}

// Reconstruction acceptance: equality in the exact regime, a recorded
// relative residual against `bound` in the float regime.
template <typename T>
bool reconstruction_ok(const Matrix<T>& recon, const Matrix<T>& reference,
                       double bound, const char* name,
                       std::vector<NamedResidual>& residuals) {
  if constexpr (is_exact_v<T>) {
    (void)bound, (void)name, (void)residuals;
    return recon == reference;
  } else {
    const double value = relative_residual(recon, reference);
    residuals.push_back({name, value});
    return value <= bound;
  }
}

template <typename T>
bool annihilates(const Matrix<T>& a, const Matrix<T>& basis,
                 const Tolerance& tol) {
  const Matrix<T> product = matmul(a, basis);
  const double scale = max_abs(a) * std::max(1.0, max_abs(basis));
  for (std::size_t i = 0; i < product.rows(); ++i)
    for (std::size_t j = 0; j < product.cols(); ++j)
      if (!tol.is_zero(product(i, j), scale)) return false;
  return true;
}

struct CommandResult {
  bool pass = false;
  std::vector<std::string> files;
  std::vector<NamedResidual> residuals;
  json extra = json::object();
  std::vector<std::string> notes;
};

template <typename T>
CommandResult run_command(const Options& opt, const Matrix<T>& a,
                          const RawMatrix& raw_x, const Tolerance& tol) {
  CommandResult result;
  const std::string base =
      opt.out.empty() ? default_base(opt.input) : opt.out;
  const auto emit = [&](const char* suffix, const Matrix<T>& factor) {
    const std::string path = base + "_" + suffix + ".mtx";
    write_path(path, factor, FileFormat::matrix_market);
    result.files.push_back(path);
  };
  const std::string& cmd = opt.command;

  if (cmd == "rank") {
    const std::size_t col_rank = rref(a, tol).rank();
    const std::size_t row_rank = rref(a.transpose(), tol).rank();
    result.pass = row_rank == col_rank;
    result.extra["row_rank"] = row_rank;
    result.extra["col_rank"] = col_rank;
    result.notes.push_back("row_rank " + std::to_string(row_rank));
    result.notes.push_back("col_rank " + std::to_string(col_rank));
  } else if (cmd == "rref") {
    const auto rr = rref(a, tol);
    emit("R0", rr.r0);
    emit("E", rr.row_ops);
    result.pass = reconstruction_ok(matmul(rr.row_ops, a), rr.r0, 1e-10,
                                    "row_ops_application", result.residuals);
    result.extra["rank"] = rr.rank();
    result.extra["pivot_cols"] = rr.pivot_cols;
    result.notes.push_back("rank " + std::to_string(rr.rank()));
  } else if (cmd == "cr") {
    const auto f = cr_decompose(a, tol);
    emit("C", f.c);
    emit("R", f.r);
    const bool embedded = f.r.select_columns(f.pivot_cols) ==
                          Matrix<T>::identity(f.rank());
    result.pass = embedded &&
                  reconstruction_ok(matmul(f.c, f.r), a,
                                    bounds::cr_reconstruction,
                                    "reconstruction", result.residuals);
    result.extra["rank"] = f.rank();
    result.notes.push_back("rank " + std::to_string(f.rank()));
  } else if (cmd == "qr") {
    const auto f = qr(a, FactorMode::reduced, tol);
    emit("Q", f.q);
    emit("R", f.r);
    bool orthogonal = true;
    if constexpr (is_exact_v<T>) {
      orthogonal = detail::exact_orthogonal_columns(f.q, f.col_norms_sq);
    } else {
      const double value = detail::max_abs_diff_from_identity(
          matmul(f.q.transpose(), f.q));
      result.residuals.push_back({"orthogonality", value});
      orthogonal = value <= bounds::orthogonality;
    }
    result.pass = detail::strictly_zero_below_diagonal(f.r) && orthogonal &&
                  reconstruction_ok(matmul(f.q, f.r), a,
                                    bounds::qr_reconstruction,
                                    "reconstruction", result.residuals);
  } else if (cmd == "lq") {
    const auto f = lq(a, FactorMode::reduced, tol);
    emit("L", f.l);
    emit("Q", f.q);
    bool orthogonal = true;
    if constexpr (is_exact_v<T>) {
      orthogonal =
          detail::exact_orthogonal_columns(f.q.transpose(), f.row_norms_sq);
    } else {
      const double value = detail::max_abs_diff_from_identity(
          matmul(f.q, f.q.transpose()));
      result.residuals.push_back({"orthogonality", value});
      orthogonal = value <= bounds::orthogonality;
    }
    result.pass = detail::strictly_zero_above_diagonal(f.l) && orthogonal &&
                  reconstruction_ok(matmul(f.l, f.q), a,
                                    bounds::lq_reconstruction,
                                    "reconstruction", result.residuals);
  } else if (cmd == "ulv" || cmd == "urv") {
    const auto f = cmd == "ulv" ? ulv(a, tol) : urv(a, tol);
    emit("U", f.u);
    emit("T", f.t);
    emit("V", f.v);
    const FactorCheck check = detail::check_utv_factor(a, f);
    result.pass = check.pass;
    result.residuals = check.residuals;
    result.extra["rank"] = f.rank;
    result.notes.push_back("rank " + std::to_string(f.rank));
  } else if (cmd == "rankdec") {
    const auto f = rank_decompose(a, tol);
    emit("D", f.d);
    emit("F", f.f);
    result.pass = rref(f.d, tol).rank() == f.rank() &&
                  rref(f.f, tol).rank() == f.rank() &&
                  reconstruction_ok(matmul(f.d, f.f), a,
                                    bounds::rank_decomposition,
                                    "reconstruction", result.residuals);
    result.extra["rank"] = f.rank();
    result.notes.push_back("rank " + std::to_string(f.rank()));
  } else if (cmd == "cur") {
    const auto f = cur_decompose(a, tol);
    emit("C", f.c);
    emit("Uc", f.u);
    emit("Rr", f.r);
    const Matrix<T> recon = matmul(f.c, matmul(inverse(f.u, tol), f.r));
    result.pass = reconstruction_ok(recon, a, bounds::cur_reconstruction,
                                    "reconstruction", result.residuals);
    result.extra["rank"] = f.rank();
    result.extra["row_idx"] = f.row_idx;
    result.extra["col_idx"] = f.col_idx;
    result.notes.push_back("rank " + std::to_string(f.rank()));
  } else if (cmd == "subspaces") {
    const auto s = four_subspaces(a, tol);
    emit("COL", s.col_basis);
    emit("ROW", s.row_basis);
    emit("NULL", s.null_basis);
    emit("LNULL", s.left_null_basis);
    const std::size_t r = s.rank;
    result.pass = s.null_basis.cols() + r == a.cols() &&
                  s.left_null_basis.cols() + r == a.rows() &&
                  rref(s.col_basis, tol).rank() == r &&
                  rref(s.row_basis, tol).rank() == r &&
                  annihilates(a, s.null_basis, tol) &&
                  annihilates(a.transpose(), s.left_null_basis, tol) &&
                  annihilates(s.row_basis.transpose(), s.null_basis, tol) &&
                  annihilates(s.col_basis.transpose(), s.left_null_basis, tol);
    result.extra["rank"] = r;
    result.notes.push_back("rank " + std::to_string(r));
  } else {  // split
    Matrix<T> x = raw_x.to_matrix<T>();
    if (x.cols() != 1 && x.rows() == 1 && x.cols() == a.cols())
      x = x.transpose();
    const auto sp = split_vector(a, x, tol);
    emit("XR", sp.row_component);
    emit("XN", sp.null_component);
    result.pass = reconstruction_ok(sp.row_component + sp.null_component, x,
                                    1e-10, "recomposition", result.residuals) &&
                  annihilates(a, sp.null_component, tol);
  }
  return result;
}

int run_typed_dispatch(const Options& opt) {
  RawMatrix raw = parse_path(opt.input, flag_format(opt.format));
  RawMatrix raw_x;
  if (opt.command == "split")
    raw_x = parse_path(opt.x_file, flag_format(opt.format));

  bool exact = raw.exact_preferred() &&
               (opt.command != "split" || raw_x.exact_preferred());
  if (opt.mode == "exact") exact = true;
  if (opt.mode == "float") exact = false;

  Tolerance tol;
  if (exact) {
    if (opt.tol) {
      std::cerr << "error: --tol applies to float mode only\n";
      return 2;
    }
  } else if (opt.tol) {
    tol.zero_tol = *opt.tol;
  } else if (const char* env = std::getenv("RANKFORGE_TOL")) {
    try {
      tol.zero_tol = std::stod(env);
    } catch (const std::exception&) {
      std::cerr << "error: RANKFORGE_TOL is not a number: " << env << "\n";
      return 2;
    }
  }
  if (tol.zero_tol < 0) {
    std::cerr << "error: tolerance must be nonnegative\n";
    return 2;
  }

  if (opt.command == "verify") {
    const auto emit_report = [&](const VerificationReport& rep) {
      if (opt.json_output) {
        const std::string doc = report_json(rep).dump(2) + "\n";
        if (opt.out.empty()) {
          std::cout << doc;
        } else {
          std::ofstream out(opt.out);
          if (!out) throw Error(opt.out + ": cannot open file for writing");
          out << doc;
        }
      } else if (opt.out.empty()) {
        print_report_text(std::cout, rep);
      } else {
        std::ofstream out(opt.out);
        if (!out) throw Error(opt.out + ": cannot open file for writing");
        print_report_text(out, rep);
      }
      return rep.overall ? 0 : 1;
    };
    return exact ? emit_report(verify_all(raw.to_matrix<Rational>(), tol))
                 : emit_report(verify_all(raw.to_matrix<double>(), tol));
  }

  const auto finish = [&](const CommandResult& result, std::size_t rows,
                          std::size_t cols) {
    if (opt.json_output) {
      json doc = {{"command", opt.command},
                  {"rows", rows},
                  {"cols", cols},
                  {"mode", exact ? "exact" : "float"},
                  {"pass", result.pass},
                  {"files", result.files},
                  {"residuals", residuals_json(result.residuals)}};
      for (const auto& [key, value] : result.extra.items()) doc[key] = value;
      std::cout << doc.dump(2) << "\n";
    } else {
      std::cout << "rows " << rows << "\ncols " << cols << "\nmode "
                << (exact ? "exact" : "float") << "\n";
      for (const auto& note : result.notes) std::cout << note << "\n";
      for (const auto& r : result.residuals)
        std::cout << r.name << " " << r.value << "\n";
      for (const auto& f : result.files) std::cout << "wrote " << f << "\n";
      std::cout << (result.pass ? "pass" : "FAIL") << "\n";
    }
    return result.pass ? 0 : 1;
  };
  if (exact) {
    const Matrix<Rational> a = raw.to_matrix<Rational>();
    return finish(run_command(opt, a, raw_x, tol), a.rows(), a.cols());
  }
  const Matrix<double> a = raw.to_matrix<double>();
  return finish(run_command(opt, a, raw_x, tol), a.rows(), a.cols());
}

}  // namespace

int main(int argc, char** argv) {
  Options opt;
  CLI::App app{"rank factorizations with exact rational or float arithmetic"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "rankforge 0.1.0");

  const struct {
    const char* name;
    const char* help;
    bool takes_x;
  } commands[] = {
      {"rank", "row and column rank via row reduction", false},
      {"rref", "reduced row echelon form R0 and row-operation matrix E",
       false},
      {"cr", "pivot-column times echelon-row factorization", false},
      {"qr", "orthogonal-triangular factorization (rows >= cols)", false},
      {"lq", "triangular-orthogonal factorization (cols >= rows)", false},
      {"ulv", "two-sided factorization with a lower triangular core", false},
      {"urv", "two-sided factorization with an upper triangular core", false},
      {"rankdec", "full-rank factor pair A = D*F", false},
      {"cur", "column/row skeleton A = C*U^-1*R", false},
      {"subspaces", "bases of the four fundamental subspaces", false},
      {"split", "split x into row-space and null-space components", true},
      {"verify", "run every route and factor check, report the results",
       false},
  };
  for (const auto& c : commands) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("input", opt.input, "matrix file (.mtx, .mm, or .csv)")
        ->required();
    if (c.takes_x)
      sub->add_option("xfile", opt.x_file, "vector file")->required();
    sub->add_option("--mode", opt.mode, "scalar regime (default: inferred)")
        ->check(CLI::IsMember({"exact", "float"}));
    sub->add_option("--tol", opt.tol, "zero threshold, float mode only");
    sub->add_option("--format", opt.format, "input format override")
        ->check(CLI::IsMember({"mm", "csv"}));
    sub->add_option("--out", opt.out,
                    c.name == std::string("verify")
                        ? "write the report to this path"
                        : "base path for factor files");
    sub->add_flag("--json", opt.json_output, "machine-readable output");
    sub->callback([&opt, name = std::string(c.name)] { opt.command = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    return run_typed_dispatch(opt);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
