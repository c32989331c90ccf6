#include "hierarb/document.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace hierarb {

namespace {

// Maps JSON pointers to the line on which their value starts. Runs only on
// text nlohmann has already accepted, so it does not re-validate syntax.
class LineIndex {
 public:
  explicit LineIndex(const std::string& text) : text_(text) {
    skip_ws();
    value("");
  }

  int line_of(std::string pointer) const {
    for (;;) {
      auto it = lines_.find(pointer);
      if (it != lines_.end()) return it->second;
      if (pointer.empty()) return 1;
      pointer.erase(pointer.rfind('/'));
    }
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) {
      if (text_[pos_] == '\n') ++line_;
      ++pos_;
    }
  }

  std::string string_token() {
    std::string out;
    ++pos_;  // opening quote
    while (pos_ < text_.size() && text_[pos_] != '"') {
      if (text_[pos_] == '\\') {
        out += text_[pos_++];
      }
      if (pos_ < text_.size()) out += text_[pos_++];
    }
    ++pos_;
    return out;
  }

  static std::string escape(const std::string& key) {
    std::string out;
    for (char c : key) {
      if (c == '~') out += "~0";
      else if (c == '/') out += "~1";
      else out += c;
    }
    return out;
  }

  void value(const std::string& ptr) {
    lines_.emplace(ptr, line_);
    if (pos_ >= text_.size()) return;
    const char c = text_[pos_];
    if (c == '{') {
      ++pos_;
      skip_ws();
      while (pos_ < text_.size() && text_[pos_] != '}') {
        const std::string key = string_token();
        skip_ws();
        ++pos_;  // colon
        skip_ws();
        value(ptr + "/" + escape(key));
        skip_ws();
        if (text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '[') {
      ++pos_;
      skip_ws();
      std::size_t idx = 0;
      while (pos_ < text_.size() && text_[pos_] != ']') {
        value(ptr + "/" + std::to_string(idx++));
        skip_ws();
        if (text_[pos_] == ',') {
          ++pos_;
          skip_ws();
        }
      }
      ++pos_;
    } else if (c == '"') {
      string_token();
    } else {
      while (pos_ < text_.size() && !std::isspace(static_cast<unsigned char>(text_[pos_])) &&
             text_[pos_] != ',' && text_[pos_] != '}' && text_[pos_] != ']') {
        ++pos_;
      }
    }
  }

  const std::string& text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  std::map<std::string, int> lines_;
};

class Reader {
 public:
  Reader(const std::string& text, std::string source) : source_(std::move(source)) {
    try {
      root_ = Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      throw ConfigError(source_ + ": " + e.what());
    }
    lines_ = std::make_unique<LineIndex>(text);
  }

  const Json& root() const { return root_; }

  [[noreturn]] void fail(const std::string& ptr, const std::string& msg) const {
    throw ConfigError(source_ + ":" + std::to_string(lines_->line_of(ptr)) + ": " +
                      (ptr.empty() ? "/" : ptr) + ": " + msg);
  }

  const Json& object(const Json& j, const std::string& ptr, std::set<std::string> allowed) const {
    if (!j.is_object()) fail(ptr, "expected an object");
    for (const auto& [key, _] : j.items()) {
      if (!allowed.count(key)) fail(ptr + "/" + key, "unknown field '" + key + "'");
    }
    return j;
  }

  const Json& field(const Json& obj, const std::string& ptr, const std::string& key) const {
    auto it = obj.find(key);
    if (it == obj.end()) fail(ptr, "missing field '" + key + "'");
    return *it;
  }

  const Json& array(const Json& j, const std::string& ptr, bool non_empty = true) const {
    if (!j.is_array()) fail(ptr, "expected an array");
    if (non_empty && j.empty()) fail(ptr, "array must not be empty");
    return j;
  }

  Rational rational(const Json& j, const std::string& ptr) const {
    if (j.is_number()) fail(ptr, "exact rational required, got " + j.dump() + " (write it as a \"p/q\" string)");
    if (!j.is_string()) fail(ptr, "exact rational required, got " + j.dump());
    try {
      return parse_rational(j.get<std::string>());
    } catch (const ConfigError& e) {
      fail(ptr, e.what());
    }
  }

  RationalVector rationals(const Json& j, const std::string& ptr) const {
    array(j, ptr);
    RationalVector out;
    for (std::size_t k = 0; k < j.size(); ++k) out.push_back(rational(j[k], ptr + "/" + std::to_string(k)));
    return out;
  }

  std::string text(const Json& j, const std::string& ptr) const {
    if (!j.is_string()) fail(ptr, "expected a string");
    return j.get<std::string>();
  }

  std::uint64_t unsigned_int(const Json& j, const std::string& ptr) const {
    if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
      fail(ptr, "expected a non-negative integer");
    }
    return j.get<std::uint64_t>();
  }

 private:
  std::string source_;
  Json root_;
  std::unique_ptr<LineIndex> lines_;
};

std::size_t state_index(const Reader& r, const Json& j, const std::string& ptr,
                        const std::vector<std::string>& labels) {
  const std::string label = r.text(j, ptr);
  for (std::size_t s = 0; s < labels.size(); ++s) {
    if (labels[s] == label) return s;
  }
  r.fail(ptr, "unknown state '" + label + "'");
}

AggregationSpec read_aggregation(const Reader& r, const Json& j, const std::vector<std::string>& labels) {
  const std::string ptr = "/aggregation";
  if (!j.is_object()) r.fail(ptr, "expected an object");
  const std::string kind = r.text(r.field(j, ptr, "kind"), ptr + "/kind");
  AggregationSpec spec;
  if (auto it = j.find("name"); it != j.end()) spec.name = r.text(*it, ptr + "/name");
  if (kind == "constant") {
    r.object(j, ptr, {"kind", "name", "sdf"});
    spec.params = AggregationSpec::Constant{r.rationals(r.field(j, ptr, "sdf"), ptr + "/sdf")};
  } else if (kind == "injective") {
    r.object(j, ptr, {"kind", "name", "base", "state", "step"});
    AggregationSpec::Injective p;
    p.base = r.rationals(r.field(j, ptr, "base"), ptr + "/base");
    p.state = state_index(r, r.field(j, ptr, "state"), ptr + "/state", labels);
    p.step = r.rational(r.field(j, ptr, "step"), ptr + "/step");
    spec.params = std::move(p);
  } else if (kind == "demand_impact") {
    r.object(j, ptr, {"kind", "name", "base", "coefficients"});
    AggregationSpec::DemandImpact p;
    p.base = r.rationals(r.field(j, ptr, "base"), ptr + "/base");
    const auto& rows = r.array(r.field(j, ptr, "coefficients"), ptr + "/coefficients");
    for (std::size_t n = 0; n < rows.size(); ++n) {
      p.coefficients.push_back(r.rationals(rows[n], ptr + "/coefficients/" + std::to_string(n)));
    }
    spec.params = std::move(p);
  } else if (kind == "tabular") {
    r.object(j, ptr, {"kind", "name", "entries"});
    AggregationSpec::Tabular p;
    const auto& entries = r.array(r.field(j, ptr, "entries"), ptr + "/entries");
    for (std::size_t e = 0; e < entries.size(); ++e) {
      const std::string ep = ptr + "/entries/" + std::to_string(e);
      r.object(entries[e], ep, {"profile", "sdf"});
      const auto& pj = r.array(r.field(entries[e], ep, "profile"), ep + "/profile");
      Profile prof;
      for (std::size_t k = 0; k < pj.size(); ++k) {
        prof.push_back(r.unsigned_int(pj[k], ep + "/profile/" + std::to_string(k)));
      }
      p.entries.emplace_back(std::move(prof), r.rationals(r.field(entries[e], ep, "sdf"), ep + "/sdf"));
    }
    spec.params = std::move(p);
  } else {
    r.fail(ptr + "/kind", "unknown aggregation kind '" + kind + "'");
  }
  return spec;
}

}  // namespace

MarketScenario parse_scenario(const std::string& text, const std::string& source) {
  const Reader r(text, source);
  const Json& root = r.object(r.root(), "",
                              {"version", "states", "assets", "risk_free_sdf", "agents", "aggregation", "flags"});
  const std::string version = r.text(r.field(root, "", "version"), "/version");
  if (version != kDocumentVersion) r.fail("/version", "unsupported version '" + version + "'");

  // States.
  const auto& sj = r.array(r.field(root, "", "states"), "/states");
  std::vector<std::string> labels;
  RationalVector probs;
  for (std::size_t s = 0; s < sj.size(); ++s) {
    const std::string p = "/states/" + std::to_string(s);
    r.object(sj[s], p, {"label", "prob"});
    labels.push_back(r.text(r.field(sj[s], p, "label"), p + "/label"));
    probs.push_back(r.rational(r.field(sj[s], p, "prob"), p + "/prob"));
  }
  std::optional<StateSpace> space;
  try {
    space.emplace(labels, probs);
  } catch (const DomainError& e) {
    r.fail("/states", e.what());
  }

  // Assets.
  const auto& aj = r.object(r.field(root, "", "assets"), "/assets", {"payoffs", "risk_free_index", "gross_rate"});
  const auto& rows = r.array(r.field(aj, "/assets", "payoffs"), "/assets/payoffs");
  std::vector<RationalVector> payoffs;
  for (std::size_t n = 0; n < rows.size(); ++n) {
    const std::string p = "/assets/payoffs/" + std::to_string(n);
    payoffs.push_back(r.rationals(rows[n], p));
    if (payoffs.back().size() != space->size()) r.fail(p, "expected one payoff per state");
  }
  const auto rf = r.unsigned_int(r.field(aj, "/assets", "risk_free_index"), "/assets/risk_free_index");
  const Rational gross = r.rational(r.field(aj, "/assets", "gross_rate"), "/assets/gross_rate");
  std::optional<AssetSet> assets;
  try {
    assets.emplace(payoffs, rf, gross, *space);
  } catch (const DomainError& e) {
    r.fail("/assets", e.what());
  }

  // Risk-free funding curve.
  std::optional<RiskFreeCurve> curve;
  if (auto it = root.find("risk_free_sdf"); it != root.end()) {
    const std::string p = "/risk_free_sdf";
    r.object(*it, p, {"default_discount", "table"});
    const Rational def = r.rational(r.field(*it, p, "default_discount"), p + "/default_discount");
    std::vector<RiskFreeCurve::Entry> entries;
    if (auto t = it->find("table"); t != it->end()) {
      r.array(*t, p + "/table", false);
      for (std::size_t e = 0; e < t->size(); ++e) {
        const std::string ep = p + "/table/" + std::to_string(e);
        r.object((*t)[e], ep, {"amount", "discount"});
        entries.push_back({r.rational(r.field((*t)[e], ep, "amount"), ep + "/amount"),
                           r.rational(r.field((*t)[e], ep, "discount"), ep + "/discount")});
      }
    }
    try {
      curve = RiskFreeCurve::table(def, std::move(entries));
    } catch (const DomainError& e) {
      r.fail(p, e.what());
    }
  }

  // Agents.
  const auto& agj = r.array(r.field(root, "", "agents"), "/agents");
  std::vector<Agent> agents;
  std::set<std::string> names;
  for (std::size_t i = 0; i < agj.size(); ++i) {
    const std::string p = "/agents/" + std::to_string(i);
    r.object(agj[i], p, {"name", "strategies"});
    Agent a;
    a.name = r.text(r.field(agj[i], p, "name"), p + "/name");
    if (!names.insert(a.name).second) r.fail(p + "/name", "duplicate agent name '" + a.name + "'");
    const auto& st = r.array(r.field(agj[i], p, "strategies"), p + "/strategies");
    for (std::size_t k = 0; k < st.size(); ++k) {
      const std::string sp = p + "/strategies/" + std::to_string(k);
      Portfolio pf{r.rationals(st[k], sp)};
      if (pf.weights.size() != assets->count()) r.fail(sp, "expected one weight per asset");
      a.strategies.push_back(std::move(pf));
    }
    agents.push_back(std::move(a));
  }

  AggregationSpec spec = read_aggregation(r, r.field(root, "", "aggregation"), labels);

  // Flags.
  ScenarioFlags flags;
  if (auto it = root.find("flags"); it != root.end()) {
    const std::string p = "/flags";
    r.object(*it, p, {"mode", "max_steps", "tie_break", "seed", "grid_bound"});
    if (auto f = it->find("mode"); f != it->end()) {
      try {
        flags.mode = parse_mode(r.text(*f, p + "/mode"));
      } catch (const ConfigError& e) {
        r.fail(p + "/mode", e.what());
      }
    }
    if (auto f = it->find("max_steps"); f != it->end()) {
      flags.max_steps = r.unsigned_int(*f, p + "/max_steps");
      if (flags.max_steps == 0) r.fail(p + "/max_steps", "max_steps must be at least 1");
    }
    if (auto f = it->find("tie_break"); f != it->end()) {
      flags.tie_break = r.text(*f, p + "/tie_break");
      if (flags.tie_break != "lexicographic") r.fail(p + "/tie_break", "only 'lexicographic' tie-breaking is supported");
    }
    if (auto f = it->find("seed"); f != it->end()) flags.seed = r.unsigned_int(*f, p + "/seed");
    if (auto f = it->find("grid_bound"); f != it->end()) {
      flags.grid_bound = static_cast<int>(r.unsigned_int(*f, p + "/grid_bound"));
    }
  }

  try {
    return MarketScenario(*space, *assets, std::move(agents), std::move(spec), curve, flags);
  } catch (const DomainError& e) {
    r.fail("/aggregation", e.what());
  }
}

MarketScenario load_scenario(const std::string& path) { return parse_scenario(read_text(path), path); }

Json rationals_to_json(const RationalVector& values) {
  Json out = Json::array();
  for (const auto& v : values) out.push_back(to_string(v));
  return out;
}

Json profile_to_json(const Profile& p) {
  Json out = Json::array();
  for (auto v : p) out.push_back(v);
  return out;
}

Json scenario_to_json(const MarketScenario& sc) {
  Json doc;
  doc["version"] = kDocumentVersion;
  Json states = Json::array();
  for (std::size_t s = 0; s < sc.space().size(); ++s) {
    states.push_back({{"label", sc.space().labels()[s]}, {"prob", to_string(sc.space().probability(s))}});
  }
  doc["states"] = states;
  Json payoffs = Json::array();
  for (const auto& row : sc.assets().payoffs()) payoffs.push_back(rationals_to_json(row));
  doc["assets"] = {{"payoffs", payoffs},
                   {"risk_free_index", sc.assets().risk_free_index()},
                   {"gross_rate", to_string(sc.assets().gross_rate())}};
  if (sc.has_custom_risk_free()) {
    Json table = Json::array();
    for (const auto& e : sc.risk_free().entries()) {
      table.push_back({{"amount", to_string(e.amount)}, {"discount", to_string(e.discount)}});
    }
    doc["risk_free_sdf"] = {{"default_discount", to_string(sc.risk_free().default_discount())},
                            {"table", table}};
  }
  Json agents = Json::array();
  for (const auto& a : sc.agents()) {
    Json strategies = Json::array();
    for (const auto& s : a.strategies) strategies.push_back(rationals_to_json(s.weights));
    agents.push_back({{"name", a.name}, {"strategies", strategies}});
  }
  doc["agents"] = agents;

  const auto& spec = sc.map().spec();
  Json agg;
  agg["kind"] = kind_name(spec.kind());
  if (!spec.name.empty()) agg["name"] = spec.name;
  if (const auto* c = std::get_if<AggregationSpec::Constant>(&spec.params)) {
    agg["sdf"] = rationals_to_json(c->sdf);
  } else if (const auto* inj = std::get_if<AggregationSpec::Injective>(&spec.params)) {
    agg["base"] = rationals_to_json(inj->base);
    agg["state"] = sc.space().labels()[inj->state];
    agg["step"] = to_string(inj->step);
  } else if (const auto* dem = std::get_if<AggregationSpec::DemandImpact>(&spec.params)) {
    agg["base"] = rationals_to_json(dem->base);
    Json rows = Json::array();
    for (const auto& row : dem->coefficients) rows.push_back(rationals_to_json(row));
    agg["coefficients"] = rows;
  } else {
    Json entries = Json::array();
    for (const auto& [p, v] : std::get<AggregationSpec::Tabular>(spec.params).entries) {
      entries.push_back({{"profile", profile_to_json(p)}, {"sdf", rationals_to_json(v)}});
    }
    agg["entries"] = entries;
  }
  doc["aggregation"] = agg;

  const auto& f = sc.flags();
  doc["flags"] = {{"mode", mode_name(f.mode)},
                  {"max_steps", f.max_steps},
                  {"tie_break", f.tie_break},
                  {"seed", f.seed},
                  {"grid_bound", f.grid_bound}};
  return doc;
}

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Profile parse_profile(const std::string& text) {
  Profile p;
  std::size_t pos = 0;
  for (;;) {
    std::size_t end = pos;
    while (end < text.size() && std::isdigit(static_cast<unsigned char>(text[end]))) ++end;
    if (end == pos) throw ConfigError("profile must be comma-separated strategy indices, got '" + text + "'");
    p.push_back(std::stoul(text.substr(pos, end - pos)));
    if (end == text.size()) return p;
    if (text[end] != ',') throw ConfigError("profile must be comma-separated strategy indices, got '" + text + "'");
    pos = end + 1;
  }
}

Json ladder_to_json(const Ladders& ladders, const MarketScenario& sc) {
  Json doc;
  doc["mode"] = mode_name(ladders.mode);
  doc["K"] = ladders.K;
  Json agents = Json::array();
  for (const auto& l : ladders.agents) {
    Json levels = Json::array();
    for (const auto& s : l.levels) levels.push_back(s);
    Json dominated = Json::array();
    for (const auto& s : l.dominated) dominated.push_back(s);
    Json orders = Json::array();
    for (std::size_t a = 0; a < l.levels.front().size(); ++a) orders.push_back(order_string(classify_order(a, l)));
    agents.push_back({{"name", sc.agent(l.agent).name},
                      {"levels", levels},
                      {"dominated", dominated},
                      {"orders", orders}});
  }
  doc["agents"] = agents;
  return doc;
}

Json trace_to_json(const TatonnementTrace& trace, const MarketScenario& sc) {
  Json doc;
  doc["policy"] = trace.policy == RevisionPolicy::Sequential ? "sequential" : "simultaneous";
  doc["initial"] = profile_to_json(trace.initial);
  Json steps = Json::array();
  for (std::size_t t = 0; t < trace.steps.size(); ++t) {
    const auto& s = trace.steps[t];
    Json revs = Json::array();
    for (const auto& r : s.revisions) {
      revs.push_back({{"agent", sc.agent(r.agent).name}, {"from", r.from}, {"to", r.to}, {"fallback", r.fallback}});
    }
    Json step{{"step", t + 1},
              {"before", profile_to_json(s.before)},
              {"after", profile_to_json(s.after)},
              {"revisions", revs},
              {"sdf_before", rationals_to_json(s.sdf_before.values())},
              {"sdf_after", rationals_to_json(s.sdf_after.values())}};
    if (s.annotated) {
      step["order_before"] = order_string(s.order_before);
      step["order_after"] = order_string(s.order_after);
      Json alpha{{"kind", alpha_kind_name(s.alpha_kind)}};
      if (s.alpha_kind == AlphaKind::Value) alpha["value"] = s.alpha;
      if (!s.note.empty()) alpha["note"] = s.note;
      step["alpha"] = alpha;
    }
    steps.push_back(step);
  }
  doc["steps"] = steps;
  doc["status"] = status_name(trace.status);
  doc["terminal"] = profile_to_json(trace.terminal);
  return doc;
}

Json plan_to_json(const TradePlan& plan, const MarketScenario& sc) {
  Json legs = Json::array();
  for (const auto& l : plan.legs) {
    legs.push_back({{"leg", l.label}, {"cost", to_string(l.cost)}, {"payout", rationals_to_json(l.payout)}});
  }
  return Json{{"agent", sc.agent(plan.agent).name},
              {"from", plan.from},
              {"to", plan.to},
              {"profile", profile_to_json(plan.profile)},
              {"legs", legs},
              {"cost", to_string(plan.cost)},
              {"payout", rationals_to_json(plan.payout)},
              {"is_arbitrage", plan_is_arbitrage(plan, sc.space())}};
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path);
  out << text;
  if (!out) throw ConfigError("failed writing " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace hierarb
