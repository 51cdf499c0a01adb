#include "primforms/cli.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "primforms/errors.hpp"
#include "primforms/formula.hpp"
#include "primforms/hecke.hpp"
#include "primforms/ringspace.hpp"
#include "primforms/specialseries.hpp"

namespace pf::cli {

namespace {

using ojson = nlohmann::ordered_json;

const std::vector<int> kLevels = {1, 2, 3, 4, 6, 8, 9};

// Runs body(i) for i < n on a few threads; callers write into slot i only.
void parallel_for(size_t n, unsigned threads, const std::function<void(size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<size_t>(threads, std::max<size_t>(n, 1)));
  std::atomic<size_t> next{0};
  std::exception_ptr first;
  std::mutex mu;
  auto worker = [&] {
    for (size_t i; (i = next.fetch_add(1)) < n;) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(mu);
        if (!first) first = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (first) std::rethrow_exception(first);
}

bool has_label(int N, const std::string& cls) {
  auto labels = class_labels(N);
  return std::find(labels.begin(), labels.end(), cls) != labels.end();
}

// Hecke classes to fetch for a class filter; empty result means the level lacks the class.
std::vector<std::string> classes_for(int N, const std::string& cls) {
  if (cls.empty()) return class_labels(N);
  if (N == 9 && cls == "P0") return {"0", "*"};
  if (has_label(N, cls)) return {cls};
  return {};
}

// Levels that carry the class filter; DomainError if none do.
std::vector<int> levels_with_class(const RunConfig& cfg) {
  std::vector<int> out;
  for (int N : selected_levels(cfg))
    if (!classes_for(N, cfg.cls).empty()) out.push_back(N);
  if (out.empty()) throw DomainError("class '" + cfg.cls + "' exists at none of the selected levels");
  return out;
}

std::string field_name(const Eigenform& f) {
  switch (f.field) {
    case Eigenform::Field::rational: return "Q";
    case Eigenform::Field::quadratic: return "Q(sqrt(" + f.radicand.get_str() + "))";
    case Eigenform::Field::charpoly_only: return "degree " + std::to_string(f.degree);
  }
  return "?";
}

size_t listing_precision(const RunConfig& cfg, int N, int k) {
  if (cfg.precision) return cfg.precision;
  return std::max(cfg.terms + 1, sturm_precision(N, k)) + cfg.margin;
}

struct Cell {
  int level, weight;
  std::vector<Eigenform> forms;
  size_t precision = 0;
};

std::vector<Cell> collect_forms(const RunConfig& cfg) {
  std::vector<Cell> cells;
  for (int N : levels_with_class(cfg))
    for (int k : selected_weights(cfg)) cells.push_back({N, k, {}, 0});
  parallel_for(cells.size(), cfg.threads, [&](size_t i) {
    Cell& c = cells[i];
    size_t prec = listing_precision(cfg, c.level, c.weight);
    for (const auto& l : classes_for(c.level, cfg.cls)) {
      auto part = eigen_decompose(c.level, c.weight, l, prec);
      c.forms.insert(c.forms.end(), part.begin(), part.end());
    }
    c.precision = prec;
    for (const auto& f : c.forms) c.precision = std::max(c.precision, f.trace.prec());
  });
  return cells;
}

std::string coefficient(const Eigenform& f, size_t n) {
  if (f.field == Eigenform::Field::charpoly_only) return to_string(f.trace[n]);
  return f.a(n).str();
}

ojson form_record(const Cell& c, const Eigenform& f, size_t terms) {
  ojson r;
  r["level"] = c.level;
  r["weight"] = c.weight;
  r["class"] = f.cls;
  r["field_degree"] = f.degree;
  if (f.field == Eigenform::Field::charpoly_only)
    r["radicand"] = nullptr;
  else
    r["radicand"] = f.radicand.get_str();
  ojson co = ojson::array();
  if (f.field != Eigenform::Field::charpoly_only)
    for (size_t n = 0; n <= terms && n < f.coeffs.prec(); ++n) co.push_back(f.a(n).str());
  r["coefficients"] = co;
  ojson cp = ojson::object();
  for (const auto& [p, poly] : f.charpolys) cp[std::to_string(p)] = poly.str();
  r["charpoly_per_prime"] = cp;
  if (f.field == Eigenform::Field::charpoly_only) {
    ojson tr = ojson::array();
    for (size_t n = 0; n <= terms && n < f.trace.prec(); ++n) tr.push_back(to_string(f.trace[n]));
    r["trace"] = tr;
  }
  r["twist"] = f.is_twist;
  r["cm"] = f.has_cm;
  r["precision"] = c.precision;
  return r;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void write_csv(const ojson& records, std::ostream& out) {
  out << "level,weight,class,field_degree,radicand,coefficients,charpoly_per_prime\n";
  for (const auto& r : records) {
    std::string co, cp;
    for (const auto& c : r["coefficients"]) co += (co.empty() ? "" : ";") + c.get<std::string>();
    for (const auto& [p, poly] : r["charpoly_per_prime"].items())
      cp += (cp.empty() ? "" : ";") + p + ":" + poly.get<std::string>();
    out << r["level"].get<int>() << ',' << r["weight"].get<int>() << ',' << csv_quote(r["class"])
        << ',' << r["field_degree"].get<int>() << ','
        << (r["radicand"].is_null() ? "" : r["radicand"].get<std::string>()) << ',' << csv_quote(co) << ','
        << csv_quote(cp) << '\n';
  }
}

}  // namespace

// ------------------------------------------------------------ config

void validate(const RunConfig& cfg) {
  for (int N : cfg.levels)
    if (!supported_level(N)) throw DomainError("unsupported level " + std::to_string(N));
  if (cfg.min_weight < 2) throw DomainError("weights start at 2");
  if (cfg.max_weight < 0) throw DomainError("negative weight bound");
}

std::vector<int> selected_levels(const RunConfig& cfg) {
  if (cfg.levels.empty()) return kLevels;
  std::vector<int> out = cfg.levels;
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<int> selected_weights(const RunConfig& cfg) {
  std::vector<int> out;
  for (int k = std::max(2, cfg.min_weight); k <= cfg.max_weight; ++k)
    if (k % 2 == 0) out.push_back(k);
  return out;
}

// ------------------------------------------------------------ dims

std::vector<DimsRow> dims_table(const RunConfig& cfg) {
  validate(cfg);
  std::vector<DimsRow> rows;
  for (int N : selected_levels(cfg))
    for (int k : selected_weights(cfg)) {
      std::vector<std::string> labels = N == 9 ? std::vector<std::string>{"P0", "tw"} : class_labels(N);
      for (const auto& l : labels)
        if (cfg.cls.empty() || cfg.cls == l) rows.push_back({N, k, l, 0, 0, 0});
    }
  // one worker per (N,k) cell, rows of a cell stay together
  std::vector<std::pair<size_t, size_t>> cells;
  for (size_t i = 0; i < rows.size();) {
    size_t j = i;
    while (j < rows.size() && rows[j].level == rows[i].level && rows[j].weight == rows[i].weight) ++j;
    cells.push_back({i, j});
    i = j;
  }
  parallel_for(cells.size(), cfg.threads, [&](size_t c) {
    for (size_t i = cells[c].first; i < cells[c].second; ++i) {
      DimsRow& r = rows[i];
      if (r.level == 9 && r.cls == "P0") {
        r.predicted = predicted_count(9, r.weight, "");
        r.computed = class_dimension(9, r.weight, "0") + class_dimension(9, r.weight, "*");
      } else {
        r.predicted = predicted_count(r.level, r.weight, r.cls);
        r.computed = class_dimension(r.level, r.weight, r.cls);
      }
      r.precision = cell_precision(r.level, r.weight);
    }
  });
  return rows;
}

int cmd_dims(const RunConfig& cfg, std::ostream& out) {
  auto rows = dims_table(cfg);
  bool bad = false;
  for (const auto& r : rows) bad |= r.mismatch();
  if (cfg.format == Format::json || cfg.format == Format::csv) {
    ojson arr = ojson::array();
    for (const auto& r : rows)
      arr.push_back({{"level", r.level},
                     {"weight", r.weight},
                     {"class", r.cls},
                     {"predicted", r.predicted},
                     {"computed", r.computed},
                     {"precision", r.precision}});
    if (cfg.format == Format::json) {
      out << arr.dump(2) << '\n';
    } else {
      out << "level,weight,class,predicted,computed,precision\n";
      for (const auto& r : rows)
        out << r.level << ',' << r.weight << ',' << r.cls << ',' << r.predicted << ',' << r.computed << ','
            << r.precision << '\n';
    }
    return bad ? consistency_error : ok;
  }
  out << "# precision: coefficients of the cusp-space basis (0 when the space is zero)\n";
  out << std::left << std::setw(4) << "N" << std::setw(5) << "k" << std::setw(7) << "class" << std::setw(11)
      << "predicted" << std::setw(10) << "computed"
      << "precision\n";
  for (const auto& r : rows) {
    out << std::left << std::setw(4) << r.level << std::setw(5) << r.weight << std::setw(7) << r.cls
        << std::setw(11) << r.predicted << std::setw(10) << r.computed << r.precision;
    if (r.mismatch()) out << "  MISMATCH";
    out << '\n';
  }
  out << "rows: " << rows.size() << (bad ? ", mismatches found\n" : ", all agree\n");
  return bad ? consistency_error : ok;
}

// ------------------------------------------------------------ newforms / export

int cmd_newforms(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  auto cells = collect_forms(cfg);
  if (cfg.format == Format::json || cfg.format == Format::csv) {
    ojson arr = ojson::array();
    for (const auto& c : cells)
      for (const auto& f : c.forms) arr.push_back(form_record(c, f, cfg.terms));
    if (cfg.format == Format::json)
      out << arr.dump(2) << '\n';
    else
      write_csv(arr, out);
    return ok;
  }
  size_t total = 0;
  for (const auto& c : cells) {
    out << "== level " << c.level << " weight " << c.weight << "  precision " << c.precision << "  sturm "
        << sturm_precision(c.level, c.weight) << "  forms " << c.forms.size() << '\n';
    int idx = 0;
    for (const auto& f : c.forms) {
      ++idx;
      total += static_cast<size_t>(f.count());
      out << "form " << idx << "  class " << f.cls << "  field " << field_name(f);
      if (f.field == Eigenform::Field::quadratic) out << "  radicand " << f.radicand.get_str();
      if (f.field == Eigenform::Field::charpoly_only) out << "  (Galois orbit of " << f.degree << ", traces shown)";
      if (f.is_twist) out << "  twist";
      if (f.has_cm) out << "  cm";
      out << '\n';
      size_t have = f.field == Eigenform::Field::charpoly_only ? f.trace.prec() : f.coeffs.prec();
      for (size_t n = 1; n <= cfg.terms && n < have; ++n)
        out << (f.field == Eigenform::Field::charpoly_only ? "  tr a(" : "  a(") << n << ") = " << coefficient(f, n)
            << '\n';
      for (const auto& [p, poly] : f.charpolys) out << "  charpoly T" << p << ": " << poly.str() << '\n';
    }
  }
  out << "newforms: " << total << '\n';
  return ok;
}

int cmd_export(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  ojson arr = ojson::array();
  for (const auto& c : collect_forms(cfg))
    for (const auto& f : c.forms) arr.push_back(form_record(c, f, cfg.terms));
  if (cfg.format == Format::csv)
    write_csv(arr, out);
  else
    out << arr.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed");
  return ok;
}

// ------------------------------------------------------------ charpoly

int cmd_charpoly(const RunConfig& cfg, std::ostream& out) {
  validate(cfg);
  auto levels = selected_levels(cfg);
  auto weights = selected_weights(cfg);
  if (cfg.levels.size() != 1 || weights.size() != 1)
    throw DomainError("charpoly needs exactly one --level and one --weight");
  if (cfg.prime <= 0) throw DomainError("charpoly needs --prime");
  int N = levels[0], k = weights[0];
  auto classes = classes_for(N, cfg.cls);
  if (classes.empty()) throw DomainError("no class '" + cfg.cls + "' at level " + std::to_string(N));
  IntPoly prod({Integer(1)});
  if (cfg.cls.empty()) {
    prod = class_charpoly(N, k, "", cfg.prime);
  } else {
    for (const auto& l : classes) prod = prod * class_charpoly(N, k, l, cfg.prime);
  }
  auto factors = factor_irreducible(prod);
  size_t prec = cell_precision(N, k);
  std::string cls = cfg.cls.empty() ? "all" : cfg.cls;
  if (cfg.format == Format::json) {
    ojson r;
    r["level"] = N;
    r["weight"] = k;
    r["class"] = cls;
    r["n"] = cfg.prime;
    r["precision"] = prec;
    r["charpoly"] = prod.str();
    ojson fs = ojson::array();
    for (const auto& [g, m] : factors) fs.push_back({{"factor", g.str()}, {"multiplicity", m}});
    r["factors"] = fs;
    out << r.dump(2) << '\n';
    return ok;
  }
  out << "level " << N << " weight " << k << " class " << cls << " n " << cfg.prime << "  precision " << prec
      << "  sturm " << sturm_precision(N, k) << '\n';
  out << "charpoly: " << prod.str() << '\n';
  out << "factored: " << factorization_str(factors) << '\n';
  return ok;
}

// ------------------------------------------------------------ verify

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::string path = cfg.dataset.empty() ? formula::default_dataset_path() : cfg.dataset;
  formula::Dataset ds = formula::load_dataset(path);
  for (const auto& id : cfg.entries) {
    bool hit = false;
    for (const auto& e : ds.entries) hit |= e.id == id || e.group == id;
    if (!hit) throw DomainError("no dataset entry '" + id + "'");
  }
  auto rep = formula::verify_dataset(ds, cfg.entries, formula::PrecisionChoice(cfg.precision, cfg.margin),
                                     cfg.threads);
  out << "dataset: " << path << '\n';
  out << "precision: " << (cfg.precision ? "fixed " + std::to_string(cfg.precision)
                                         : "Sturm bound + " + std::to_string(cfg.margin))
      << " (per entry below)\n";
  size_t w = 4;
  for (const auto& r : rep.entries) w = std::max(w, r.id.size());
  for (const auto& r : rep.entries) {
    std::string st = formula::status_name(r.status);
    std::transform(st.begin(), st.end(), st.begin(), [](unsigned char ch) { return std::toupper(ch); });
    out << std::left << std::setw(static_cast<int>(w) + 2) << r.id << std::setw(16) << st << "prec "
        << std::setw(6) << r.precision << "conj " << std::setw(4) << r.conjugates << r.detail;
    if (r.mismatch)
      out << " [index " << r.mismatch->index << ": expected " << r.mismatch->expected << ", got "
          << r.mismatch->got << "]";
    out << '\n';
  }
  size_t E = rep.entries.size();
  out << "entries: " << E << ", pass: " << rep.pass << ", fail-annotated: " << rep.fail_annotated
      << ", unsupported: " << rep.unsupported << '\n';
  out << "fail: " << rep.fail << '\n';
  if (!cfg.report_path.empty()) {
    std::ofstream js(cfg.report_path, std::ios::binary);
    if (!js) {
      err << "cannot write report " << cfg.report_path << '\n';
      return usage_error;
    }
    for (const auto& r : rep.entries) js << formula::report_json_line(r) << '\n';
    out << "report: " << cfg.report_path << '\n';
  }
  return rep.fail == 0 && rep.unsupported == 0 ? ok : verification_failed;
}

// ------------------------------------------------------------ command line

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Primitive newforms of small level: tables, eigenforms, formula checks"};
  app.require_subcommand(1);
  RunConfig cfg;
  int weight = 0;
  std::string format = "text";

  auto common = [&](CLI::App* sub) {
    sub->add_option("--level,-N", cfg.levels, "levels (repeat or comma-separate)")->delimiter(',');
    sub->add_option("--weight,-k", weight, "single even weight");
    sub->add_option("--min-weight", cfg.min_weight, "smallest weight");
    sub->add_option("--max-weight", cfg.max_weight, "largest weight");
    sub->add_option("--class,-c", cfg.cls, "sign class label (P0 and tw at level 9)");
    sub->add_option("--precision", cfg.precision, "fixed number of q-coefficients");
    sub->add_option("--margin", cfg.margin, "coefficients added to the derived precision");
    sub->add_option("--format", format, "text, json or csv")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  };

  auto* dims = app.add_subcommand("dims", "predicted vs computed newform counts");
  common(dims);
  auto* nf = app.add_subcommand("newforms", "list eigenforms");
  common(nf);
  nf->add_option("--terms", cfg.terms, "print a(1)..a(terms)");
  auto* cp = app.add_subcommand("charpoly", "product of (X - a_n(f)) over a class");
  common(cp);
  cp->add_option("--prime,-p", cfg.prime, "n (squarefree, prime to the level)")->required();
  auto* ver = app.add_subcommand("verify", "check the formula dataset");
  ver->add_option("--dataset", cfg.dataset, "dataset path (default: $PRIMFORMS_DATASET or the bundled file)");
  ver->add_option("--entry,-e", cfg.entries, "entry id or group id (repeatable)");
  ver->add_option("--report", cfg.report_path, "JSON lines report path (empty to skip)");
  ver->add_option("--precision", cfg.precision, "fixed number of q-coefficients");
  ver->add_option("--margin", cfg.margin, "coefficients beyond the Sturm bound");
  ver->add_option("--threads", cfg.threads, "worker threads (0 = all cores)");
  auto* ex = app.add_subcommand("export", "eigenform data as JSON or CSV");
  common(ex);
  ex->add_option("--terms", cfg.terms, "coefficients a(0)..a(terms)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return ok;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return ok;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return usage_error;
  }

  try {
    if (format == "json") cfg.format = Format::json;
    if (format == "csv") cfg.format = Format::csv;
    auto* sub = app.get_subcommands().front();
    if (sub == ver) return cmd_verify(cfg, out, err);
    if (sub->count("--weight")) {
      if (weight < 2 || weight % 2) throw DomainError("weight must be even and >= 2");
      cfg.min_weight = cfg.max_weight = weight;
    } else if (sub != dims && !sub->count("--max-weight")) {
      throw DomainError("give --weight or --max-weight");
    }
    if (sub == dims) return cmd_dims(cfg, out);
    if (sub == nf) return cmd_newforms(cfg, out);
    if (sub == cp) return cmd_charpoly(cfg, out);
    if (sub == ex) {
      if (cfg.format == Format::text) cfg.format = Format::json;
      return cmd_export(cfg, out);
    }
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << '\n';
    return usage_error;
  } catch (const ConsistencyError& e) {
    err << "consistency error: " << e.what() << '\n';
    return consistency_error;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return consistency_error;
  }
  return usage_error;
}

}  // namespace pf::cli
