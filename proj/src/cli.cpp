#include "softcover/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "softcover/channels.hpp"
#include "softcover/covering.hpp"
#include "softcover/entropies.hpp"
#include "softcover/errors.hpp"
#include "softcover/protocols.hpp"
#include "softcover/search.hpp"
#include "softcover/zoo.hpp"

namespace softcover::cli {

namespace {

std::vector<std::string> split_list(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double parse_double(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + s + "' is not a number", key);
  }
}

int parse_int(const std::string& s, const std::string& key) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ValidationError("'" + s + "' is not an integer", key);
  }
}

json number(double x) {
  if (std::isfinite(x)) return x;
  return io::format_double(x);
}

std::string cell(const json& v) {
  if (v.is_number_float()) return io::format_double(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  if (v.is_null()) return "";
  return v.dump();
}

// Registers the options of one subcommand against the shared config.
void add_options(CLI::App* sub, ExperimentConfig& c, const std::vector<std::string>& keys) {
  for (const auto& k : keys) {
    const std::string flag = "--" + k;
    if (k == "channel") sub->add_option(flag, c.channel, "channel spec name[:params]");
    else if (k == "state") sub->add_option(flag, c.state, "state preset or JSON file");
    else if (k == "sigma") sub->add_option(flag, c.sigma, "second state (Dmax, V)");
    else if (k == "quantity") {
      sub->add_option(flag, c.quantity, "S|Hmin|Hmax|HminSmooth|HmaxSmooth|Dmax|Ic|holevo|V")
          ->check(CLI::IsMember({"S", "Hmin", "Hmax", "HminSmooth", "HmaxSmooth", "Dmax",
                                 "Ic", "holevo", "V"}));
    } else if (k == "split") sub->add_option(flag, c.split, "bipartition 'A|B'");
    else if (k == "n") sub->add_option(flag, c.n, "block length");
    else if (k == "ranks") sub->add_option(flag, c.ranks, "comma-separated ranks")->delimiter(',');
    else if (k == "rank") sub->add_option(flag, c.rank, "branch rank (0: from the bound)");
    else if (k == "trials") sub->add_option(flag, c.trials, "random unitaries per rank");
    else if (k == "delta") sub->add_option(flag, c.delta, "smoothing parameter delta");
    else if (k == "eta") sub->add_option(flag, c.eta, "decoupling parameter eta");
    else if (k == "epsilon") sub->add_option(flag, c.epsilon, "error / smoothing epsilon");
    else if (k == "accuracy") sub->add_option(flag, c.accuracy, "SDP target gap");
    else if (k == "budget") sub->add_option(flag, c.budget, "search starts");
    else if (k == "dim") sub->add_option(flag, c.dim, "input dimension |A|");
    else if (k == "lambda1") sub->add_option(flag, c.lambda1, "first-kind error");
    else if (k == "lambda2") sub->add_option(flag, c.lambda2, "second-kind error");
    else if (k == "net-delta") sub->add_option(flag, c.net_delta, "net fineness");
    else if (k == "seed") sub->add_option(flag, c.seed, "RNG seed (default $SOFTCOVER_SEED or 0)");
    else if (k == "out") sub->add_option(flag, c.out, "output file");
    else if (k == "format") sub->add_option(flag, c.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  }
}

const std::vector<std::string>& keys_for(const std::string& sub) {
  static const std::vector<std::string> cover = {"channel", "state", "n", "ranks", "trials",
                                                 "delta", "eta", "seed", "out", "format"};
  static const std::vector<std::string> entropy = {"quantity", "state", "sigma", "channel",
                                                   "split", "epsilon", "accuracy", "seed",
                                                   "out", "format"};
  static const std::vector<std::string> rd = {"channel", "state", "n", "rank", "trials",
                                              "delta", "eta", "epsilon", "budget", "seed",
                                              "out", "format"};
  static const std::vector<std::string> resolve = {"channel", "state", "epsilon", "budget",
                                                   "seed", "out", "format"};
  static const std::vector<std::string> idbound = {"n", "dim", "lambda1", "lambda2",
                                                   "net-delta", "channel", "seed", "out",
                                                   "format"};
  static const std::vector<std::string> none = {"format", "out"};
  if (sub == "cover") return cover;
  if (sub == "entropy") return entropy;
  if (sub == "rd") return rd;
  if (sub == "resolve") return resolve;
  if (sub == "idbound") return idbound;
  return none;
}

const std::vector<std::string> kSubcommands = {"cover", "entropy", "rd", "resolve", "idbound", "zoo"};

void build_app(CLI::App& app, ExperimentConfig& c, std::string& config_path) {
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  for (const auto& name : kSubcommands) {
    auto* sub = app.add_subcommand(name, name == "zoo" ? "list named channels"
                                                       : name + " experiment");
    sub->add_option("--config", config_path, "JSON config file; flags override it");
    if (name == "zoo") {
      sub->add_subcommand("list", "list named channels");
      sub->require_subcommand(1);
    }
    add_options(sub, c, keys_for(name));
  }
}

void validate(const ExperimentConfig& c) {
  auto unit = [](double x, const char* key) {
    if (!(x > 0.0 && x < 1.0)) {
      throw ValidationError(std::string(key) + " must lie in (0, 1), got " + io::format_double(x),
                            key);
    }
  };
  if (c.n < 1) throw ValidationError("n must be >= 1", "n");
  if (c.trials < 1) throw ValidationError("trials must be >= 1", "trials");
  if (c.budget < 1) throw ValidationError("budget must be >= 1", "budget");
  if (c.rank < 0) throw ValidationError("rank must be >= 0", "rank");
  if (c.dim < 1) throw ValidationError("dim must be >= 1", "dim");
  if (!(c.accuracy > 0.0 && c.accuracy < 1e-2)) {
    throw ValidationError("accuracy must lie in (0, 0.01)", "accuracy");
  }
  unit(c.delta, "delta");
  unit(c.eta, "eta");
  unit(c.net_delta, "net-delta");
  if (c.subcommand != "entropy" || c.quantity == "HminSmooth" || c.quantity == "HmaxSmooth") {
    unit(c.epsilon, "epsilon");
  } else if (!(c.epsilon >= 0.0 && c.epsilon < 1.0)) {
    throw ValidationError("epsilon must lie in [0, 1)", "epsilon");
  }
  for (int r : c.ranks) {
    if (r < 1) throw ValidationError("ranks must be >= 1", "ranks");
  }
}

std::string resolve_format(const ExperimentConfig& c, const std::string& fallback) {
  if (!c.format.empty()) return c.format;
  if (c.out.size() >= 4 && c.out.substr(c.out.size() - 4) == ".csv") return "csv";
  if (c.out.size() >= 5 && c.out.substr(c.out.size() - 5) == ".json") return "json";
  return fallback;
}

void write_output(const ExperimentConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.out, std::ios::binary);
  if (!f) throw ValidationError("cannot write '" + c.out + "'", "out");
  f << text;
}

json provenance(const ExperimentConfig& c) {
  return {{"tool", kToolName}, {"version", kVersion}, {"seed", c.seed}, {"config", c.to_json()}};
}

json report_json(const entropies::EntropyReport& r) {
  json j = {{"value", number(r.value)},
            {"lower", number(r.lower)},
            {"upper", number(r.upper)},
            {"duality_gap", number(r.duality_gap)},
            {"iterations", r.iterations},
            {"method", r.method}};
  if (r.witness) j["witness"] = io::matrix_to_json(*r.witness);
  if (r.sigma) j["sigma"] = io::matrix_to_json(*r.sigma);
  return j;
}

Matrix input_state(const ExperimentConfig& c, int dim) {
  const Matrix s = c.state.empty() ? qmat::DensityOperator::maximally_mixed(dim).mat()
                                   : state_preset(c.state).mat();
  if (s.rows() != dim) {
    throw ValidationError("state has dimension " + std::to_string(s.rows()) + ", expected " +
                              std::to_string(dim),
                          "state");
  }
  return s;
}

search::Options search_options(const ExperimentConfig& c) {
  search::Options o;
  o.starts = c.budget;
  return o;
}

int run_cover(const ExperimentConfig& c, std::ostream& out) {
  const auto ch = zoo::from_spec(c.channel);
  const Matrix sigma = input_state(c, ch.in_dim());
  long long dim = 1;
  for (int k = 0; k < c.n; ++k) dim *= ch.in_dim();
  std::vector<int> ranks = c.ranks;
  if (ranks.empty()) {
    covering::check_dimension(static_cast<int>(std::min<long long>(dim, 1 << 20)), "cover");
    for (int r = 1; r <= dim; ++r) ranks.push_back(r);
  }
  const Rng rng(c.seed);
  const auto sweep =
      covering::rank_error_sweep(sigma, ch, c.n, ranks, c.trials, c.delta, c.eta, rng);
  std::vector<Record> records;
  for (const auto& row : sweep.rows) {
    records.push_back({{"n", row.n},
                       {"r", row.r},
                       {"trial", row.trial},
                       {"branch_x", row.branch_x},
                       {"eps", number(row.eps)},
                       {"eps_bound", number(row.eps_bound)},
                       {"logTheta_bound", number(row.log_theta_bound)}});
  }
  if (resolve_format(c, "csv") == "csv") {
    write_output(c, emit_csv(records, provenance(c)), out);
  } else {
    json rows = json::array();
    for (const auto& rec : records) {
      json o = json::object();
      for (const auto& [k, v] : rec) o[k] = v;
      rows.push_back(o);
    }
    json best = json::array();
    for (const auto& code : sweep.codes) {
      best.push_back({{"r", code.r},
                      {"rank", code.rank},
                      {"eps", number(code.achieved_eps)},
                      {"trial", code.trial_index},
                      {"branch_x", code.branch_x}});
    }
    json result = {{"rows", rows},
                   {"best", best},
                   {"bound",
                    {{"logTheta", number(sweep.bound.log_theta)},
                     {"eps", number(sweep.bound.eps_bound)},
                     {"eps_average", number(sweep.bound.eps_bound_average)},
                     {"h_min_smooth", number(sweep.bound.h_min_smooth)},
                     {"method", sweep.bound.method}}}};
    write_output(c, emit_json(result, provenance(c)), out);
  }
  return kOk;
}

int run_entropy(const ExperimentConfig& c, std::ostream& out) {
  if (c.state.empty()) throw ValidationError("entropy needs --state", "state");
  const auto rho = state_preset(c.state);
  json result = {{"quantity", c.quantity}};
  auto scalar = [&](double v) {
    entropies::EntropyReport r;
    r.value = r.lower = r.upper = v;
    r.method = "closed-form";
    return r;
  };
  entropies::EntropyReport r;
  const std::string& q = c.quantity;
  if (q == "S") {
    r = scalar(entropies::von_neumann(rho));
  } else if (q == "Hmin") {
    r = entropies::h_min(rho, c.split, c.accuracy);
  } else if (q == "Hmax") {
    r = entropies::h_max(rho, c.split, c.accuracy);
  } else if (q == "HminSmooth") {
    r = entropies::h_min_smooth(rho, c.split, c.epsilon, c.accuracy);
  } else if (q == "HmaxSmooth") {
    r = entropies::h_max_smooth(rho, c.split, c.epsilon, c.accuracy);
  } else if (q == "Dmax") {
    if (c.sigma.empty()) throw ValidationError("Dmax needs --sigma", "sigma");
    const auto omega = state_preset(c.sigma);
    r = c.epsilon > 0.0 ? entropies::d_max_smooth(rho.mat(), omega.mat(), c.epsilon, c.accuracy)
                        : entropies::d_max(rho.mat(), omega.mat());
  } else if (q == "Ic") {
    r = scalar(entropies::coherent_information(rho.mat(), zoo::from_spec(c.channel)));
  } else if (q == "holevo") {
    r = scalar(entropies::mutual_information(rho, c.split));
  } else if (q == "V") {
    r = scalar(c.sigma.empty()
                   ? entropies::channel_info_variance(rho.mat(), zoo::from_spec(c.channel))
                   : entropies::info_variance(rho.mat(), state_preset(c.sigma).mat()));
  }
  result.update(report_json(r));
  write_output(c, emit_json(result, provenance(c)), out);
  return kOk;
}

int run_rd(const ExperimentConfig& c, std::ostream& out) {
  const auto nw = zoo::from_spec(c.channel);
  protocols::SourceCodingSetup setup{input_state(c, nw.out_dim()), nw};
  setup.validate();
  Rng rng(c.seed);
  const auto section = search::feasible_section(setup.rho_br(), nw);
  const Matrix sigma = section.center;
  Rng search_rng = rng.substream(1);
  const auto bounds = protocols::oneshot_lossy_bounds(setup, sigma, c.delta, c.eta, c.epsilon,
                                                      search_options(c), search_rng);
  Rng rate_rng = rng.substream(2);
  const auto rate = protocols::asymptotic_lossy_rate(setup, search_options(c), rate_rng);

  long long dim = 1;
  for (int k = 0; k < c.n; ++k) dim *= nw.in_dim();
  int r = c.rank;
  if (r == 0) {
    const double t = std::ceil(std::exp2(bounds.achievable_log_theta) - 1e-9);
    r = static_cast<int>(std::min<double>(t, static_cast<double>(dim)));
  }
  r = static_cast<int>(std::min<long long>(std::max(r, 1), dim));
  const Matrix sn = qmat::kron_power(sigma, c.n);
  const auto nn = c.n == 1 ? nw : channels::tensor_power(nw, c.n);
  const auto code = covering::synthesize(sn, nn, r, rng.substream(3), c.trials);
  const auto protocol = protocols::compression_from_covering(setup, code.sigma_hat, c.n);
  const auto back = protocols::covering_from_compression(setup, protocol);

  json result = {
      {"sigma_AR", io::matrix_to_json(sigma)},
      {"achievable_logTheta", number(bounds.achievable_log_theta)},
      {"achievable_eps", number(bounds.achievable_eps)},
      {"achievable_eps_covering", number(bounds.achievable_eps_covering)},
      {"converse_logTheta", number(bounds.converse_log_theta)},
      {"converse_heuristic", bounds.converse_heuristic},
      {"converse_evaluations", bounds.converse_evaluations},
      {"budget", c.budget},
      {"asymptotic_rate", number(rate.value)},
      {"asymptotic_rate_heuristic", rate.heuristic},
      {"code", {{"r", r}, {"rank", code.rank}, {"eps", number(code.achieved_eps)},
                {"trial", code.trial_index}, {"branch_x", code.branch_x}}},
      {"protocol", {{"message_dim", protocol.message_dim},
                    {"n", protocol.n},
                    {"distortion", number(protocol.measured_distortion)},
                    {"distortion_bound", number(4.0 * std::sqrt(code.achieved_eps))}}},
      {"round_trip_eps", number(back.achieved_eps)}};
  write_output(c, emit_json(result, provenance(c)), out);
  return kOk;
}

int run_resolve(const ExperimentConfig& c, std::ostream& out) {
  const auto ch = zoo::from_spec(c.channel);
  const Matrix sigma = input_state(c, ch.in_dim());
  Rng rng(c.seed);
  const auto lower = protocols::resolvability_lower(sigma, ch, c.epsilon, search_options(c), rng);
  const auto upper = protocols::resolvability_upper(ch);
  json result = {{"lower", number(lower.value)},
                 {"lower_heuristic", lower.heuristic},
                 {"evaluations", lower.evaluations},
                 {"budget", c.budget},
                 {"upper", upper ? json(number(*upper)) : json("unavailable")}};
  write_output(c, emit_json(result, provenance(c)), out);
  return kOk;
}

int run_idbound(const ExperimentConfig& c, std::ostream& out) {
  protocols::IdBoundInput in{c.n, c.dim, c.lambda1, c.lambda2};
  const auto ch = zoo::from_spec(c.channel);
  const auto unrestricted = protocols::unrestricted_id_upper(ch);
  json result = {
      {"sim_id_bound", number(protocols::sim_id_bound(in))},
      {"epsilon_net_log2", number(protocols::epsilon_net_cardinality(c.dim, c.net_delta))},
      {"unrestricted_id_upper",
       unrestricted ? json(number(*unrestricted)) : json("unavailable")}};
  write_output(c, emit_json(result, provenance(c)), out);
  return kOk;
}

int run_zoo(const ExperimentConfig& c, std::ostream& out) {
  std::vector<Record> records;
  for (const auto& e : zoo::list()) {
    records.push_back({{"name", e.name}, {"params", e.params}, {"description", e.description}});
  }
  if (resolve_format(c, "text") == "text") {
    std::ostringstream s;
    for (const auto& e : zoo::list()) s << e.name << ":" << e.params << "  " << e.description << "\n";
    write_output(c, s.str(), out);
  } else if (resolve_format(c, "text") == "csv") {
    write_output(c, emit_csv(records, provenance(c)), out);
  } else {
    json arr = json::array();
    for (const auto& e : zoo::list()) {
      arr.push_back({{"name", e.name}, {"params", e.params}, {"description", e.description}});
    }
    write_output(c, emit_json(arr, provenance(c)), out);
  }
  return kOk;
}

}  // namespace

json ExperimentConfig::to_json() const {
  json j = {{"subcommand", subcommand}};
  const auto& keys = keys_for(subcommand);
  auto has = [&](const char* k) { return std::find(keys.begin(), keys.end(), k) != keys.end(); };
  if (has("channel")) j["channel"] = channel;
  if (has("state")) j["state"] = state;
  if (has("sigma")) j["sigma"] = sigma;
  if (has("quantity")) j["quantity"] = quantity;
  if (has("split")) j["split"] = split;
  if (has("n")) j["n"] = n;
  if (has("ranks")) j["ranks"] = ranks;
  if (has("rank")) j["rank"] = rank;
  if (has("trials")) j["trials"] = trials;
  if (has("delta")) j["delta"] = delta;
  if (has("eta")) j["eta"] = eta;
  if (has("epsilon")) j["epsilon"] = epsilon;
  if (has("accuracy")) j["accuracy"] = accuracy;
  if (has("budget")) j["budget"] = budget;
  if (has("dim")) j["dim"] = dim;
  if (has("lambda1")) j["lambda1"] = lambda1;
  if (has("lambda2")) j["lambda2"] = lambda2;
  if (has("net-delta")) j["net-delta"] = net_delta;
  if (has("seed")) j["seed"] = seed;
  return j;
}

std::optional<ExperimentConfig> parse_config(const std::vector<std::string>& args,
                                             std::string* usage) {
  ExperimentConfig c;
  std::string config_path;
  CLI::App app{"Numerical workbench for quantum soft covering", kToolName};
  build_app(app, c, config_path);
  if (usage) *usage = app.help();
  if (args.empty()) throw ValidationError("no subcommand given\n" + app.help(), "subcommand");

  if (const char* env = std::getenv("SOFTCOVER_SEED")) {
    try {
      c.seed = std::stoull(env);
    } catch (const std::exception&) {
      throw ValidationError("SOFTCOVER_SEED is not an unsigned integer", "seed");
    }
  }

  // flags from the JSON config go first so that explicit flags win
  std::vector<std::string> full = args;
  std::string cfg_file;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) cfg_file = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) cfg_file = args[k].substr(9);
  }
  if (!cfg_file.empty()) {
    const json j = io::read_json_file(cfg_file);
    if (!j.is_object()) throw ValidationError("config file must hold a JSON object", "config");
    const std::string& sub = args[0];
    const auto& allowed = keys_for(sub);
    std::vector<std::string> injected;
    for (const auto& [key, value] : j.items()) {
      if (key == "subcommand") {
        if (value != sub) throw ValidationError("config is for subcommand " + value.dump(), key);
        continue;
      }
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
        throw ValidationError("unknown config key '" + key + "'", key);
      }
      if (key == "ranks") {
        if (!value.is_array()) throw ValidationError("ranks must be an array", key);
        if (value.empty()) continue;
        std::string joined;
        for (const auto& r : value) joined += (joined.empty() ? "" : ",") + std::to_string(r.get<int>());
        injected.push_back("--ranks");
        injected.push_back(joined);
        continue;
      }
      injected.push_back("--" + key);
      if (value.is_string()) injected.push_back(value.get<std::string>());
      else if (value.is_number_float()) injected.push_back(io::format_double(value.get<double>()));
      else if (value.is_number()) injected.push_back(value.dump());
      else throw ValidationError("config value for '" + key + "' has the wrong type", key);
    }
    full.clear();
    full.push_back(args[0]);
    full.insert(full.end(), injected.begin(), injected.end());
    full.insert(full.end(), args.begin() + 1, args.end());
  }

  std::vector<std::string> rev(full.rbegin(), full.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    std::string key;
    const std::string msg = e.what();
    for (const auto& k : {"delta", "eta", "epsilon", "n", "ranks", "trials", "channel",
                          "quantity", "format", "seed", "budget"}) {
      if (msg.find(std::string("--") + k) != std::string::npos) {
        key = k;
        break;
      }
    }
    throw ValidationError(msg, key);
  }
  for (const auto* sub : app.get_subcommands()) {
    c.subcommand = sub->get_name();
    // Dmax is unsmoothed unless epsilon is given
    if (c.subcommand == "entropy" && c.quantity == "Dmax" && sub->count("--epsilon") == 0) {
      c.epsilon = 0.0;
    }
  }
  validate(c);
  return c;
}

qmat::DensityOperator state_preset(const std::string& spec) {
  const auto parts = split_list(spec, ':');
  const std::string& name = parts.empty() ? spec : parts[0];
  if (name == "maxmixed" || name == "zero") {
    const int d = parts.size() > 1 ? parse_int(parts[1], "state") : 2;
    if (d < 1) throw ValidationError("state dimension must be >= 1", "state");
    return name == "maxmixed" ? qmat::DensityOperator::maximally_mixed(d)
                              : qmat::DensityOperator::basis_state(d, 0);
  }
  if (name == "plus") {
    Matrix m = Matrix::Constant(2, 2, 0.5);
    return qmat::DensityOperator(m);
  }
  if (name == "bell") {
    Vector v = Vector::Zero(4);
    v(0) = v(3) = std::sqrt(0.5);
    return qmat::DensityOperator(v * v.adjoint(), qmat::SystemSignature({2, 2}, {"A", "B"}));
  }
  if (name == "diag") {
    if (parts.size() != 2) throw ValidationError("diag preset needs diag:p0,p1,...", "state");
    const auto items = split_list(parts[1], ',');
    Matrix m = Matrix::Zero(static_cast<Eigen::Index>(items.size()),
                            static_cast<Eigen::Index>(items.size()));
    for (std::size_t k = 0; k < items.size(); ++k) {
      m(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) = parse_double(items[k], "state");
    }
    return qmat::DensityOperator(m);
  }
  std::ifstream probe(spec);
  if (!probe) throw ValidationError("unknown state preset or missing file '" + spec + "'", "state");
  return io::state_from_json(io::read_json_file(spec));
}

std::string emit_csv(const std::vector<Record>& records, const json& prov) {
  if (records.empty()) throw ValidationError("no records to write", "records");
  std::ostringstream s;
  s << "# tool " << prov.value("tool", kToolName) << " " << prov.value("version", kVersion) << "\n";
  s << "# seed " << prov.value("seed", json(0)).dump() << "\n";
  s << "# config " << prov.value("config", json::object()).dump() << "\n";
  const Record& first = records.front();
  for (std::size_t k = 0; k < first.size(); ++k) s << (k ? "," : "") << first[k].first;
  s << "\n";
  for (const auto& rec : records) {
    if (rec.size() != first.size()) throw ValidationError("records have mixed schemas", "records");
    for (std::size_t k = 0; k < rec.size(); ++k) {
      if (rec[k].first != first[k].first) {
        throw ValidationError("records have mixed schemas", "records");
      }
      s << (k ? "," : "") << cell(rec[k].second);
    }
    s << "\n";
  }
  return s.str();
}

std::string emit_json(const json& result, const json& prov) {
  json j = prov;
  j["result"] = result;
  return j.dump(2) + "\n";
}

int run(const ExperimentConfig& c, std::ostream& out) {
  if (c.subcommand == "cover") return run_cover(c, out);
  if (c.subcommand == "entropy") return run_entropy(c, out);
  if (c.subcommand == "rd") return run_rd(c, out);
  if (c.subcommand == "resolve") return run_resolve(c, out);
  if (c.subcommand == "idbound") return run_idbound(c, out);
  if (c.subcommand == "zoo") return run_zoo(c, out);
  throw ValidationError("unknown subcommand '" + c.subcommand + "'", "subcommand");
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::string usage;
  try {
    const auto cfg = parse_config(args, &usage);
    if (!cfg) {
      out << usage;
      return kOk;
    }
    return run(*cfg, out);
  } catch (const ValidationError& e) {
    err << "error";
    if (!e.key().empty()) err << " [" << e.key() << "]";
    err << ": " << e.what() << "\n";
    return kValidation;
  } catch (const SolverError& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolver;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return kResource;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace softcover::cli
