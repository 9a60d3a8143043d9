/*
Copyright 2026 The posauction Authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#include "posauction/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "posauction/axioms.hpp"
#include "posauction/brand_alloc.hpp"
#include "posauction/click_models.hpp"
#include "posauction/extern_alloc.hpp"
#include "posauction/pricing.hpp"
#include "posauction/validate.hpp"

namespace posauction {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

[[noreturn]] void parse_fail(const std::string& what) { throw_error(Errc::parse_error, what); }

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* k : allowed)
            if (item.key() == k) known = true;
        if (!known) parse_fail("unknown key '" + item.key() + "' in " + where);
    }
}

double number_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key)) parse_fail("missing key '" + std::string(key) + "' in " + where);
    const json& v = obj.at(key);
    if (!v.is_number()) parse_fail("key '" + std::string(key) + "' in " + where + " must be a number");
    return v.get<double>();
}

std::vector<double> number_array(const json& v, const std::string& where) {
    if (!v.is_array()) parse_fail(where + " must be an array of numbers");
    std::vector<double> out;
    out.reserve(v.size());
    for (const auto& x : v) {
        if (!x.is_number()) parse_fail(where + " must contain only numbers");
        out.push_back(x.get<double>());
    }
    return out;
}

}  // namespace

AuctionInstance parse_instance(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        parse_fail(e.what());
    }
    if (!doc.is_object()) parse_fail("instance document must be an object");
    reject_unknown_keys(doc, {"positions", "advertisers", "params"}, "instance document");

    AuctionInstance inst;

    if (!doc.contains("positions")) parse_fail("missing key 'positions'");
    const json& pos = doc.at("positions");
    if (!pos.is_object()) parse_fail("'positions' must be an object");
    reject_unknown_keys(pos, {"n", "beta", "eta"}, "positions");
    const bool has_n = pos.contains("n");
    const bool has_beta = pos.contains("beta") || pos.contains("eta");
    if (has_n && has_beta) parse_fail("'positions' mixes 'n' with 'beta'/'eta' (ambiguous profile)");
    if (!has_n && !has_beta) parse_fail("'positions' needs either 'n' or 'beta' and 'eta'");
    if (has_n) {
        inst.positions = PositionProfile{number_array(pos.at("n"), "positions.n")};
    } else {
        if (!pos.contains("beta") || !pos.contains("eta"))
            parse_fail("brand positions need both 'beta' and 'eta'");
        inst.brand_positions = BrandPositionProfile{number_array(pos.at("beta"), "positions.beta"),
                                                    number_array(pos.at("eta"), "positions.eta")};
    }

    if (!doc.contains("advertisers")) parse_fail("missing key 'advertisers'");
    const json& ads = doc.at("advertisers");
    if (!ads.is_array()) parse_fail("'advertisers' must be an array");
    for (const auto& item : ads) {
        if (!item.is_object()) parse_fail("each advertiser must be an object");
        reject_unknown_keys(item, {"id", "bid", "quality", "brand"}, "advertiser");
        Advertiser a;
        if (!item.contains("id") || !item.at("id").is_string())
            parse_fail("advertiser needs a string 'id'");
        a.id = item.at("id").get<std::string>();
        a.bid = number_field(item, "bid", "advertiser '" + a.id + "'");
        a.quality = number_field(item, "quality", "advertiser '" + a.id + "'");
        if (item.contains("brand")) {
            if (!item.at("brand").is_boolean())
                parse_fail("advertiser 'brand' must be a boolean");
            a.brand = item.at("brand").get<bool>();
        }
        inst.advertisers.push_back(std::move(a));
    }

    if (doc.contains("params")) {
        const json& params = doc.at("params");
        if (!params.is_object()) parse_fail("'params' must be an object");
        reject_unknown_keys(params, {"lambda", "nu"}, "params");
        ExternalityParams p;
        p.lambda = number_field(params, "lambda", "params");
        p.nu = params.contains("nu") ? number_field(params, "nu", "params") : 1.0;
        inst.params = p;
    }

    auto issues = validate_instance(inst);
    if (!issues.empty()) throw AuctionError(issues.front().code, describe(issues));
    return inst;
}

std::string emit_instance(const AuctionInstance& inst) {
    ordered_json doc;
    ordered_json pos;
    if (inst.positions) {
        pos["n"] = inst.positions->scores;
    } else if (inst.brand_positions) {
        pos["beta"] = inst.brand_positions->beta;
        pos["eta"] = inst.brand_positions->eta;
    }
    doc["positions"] = pos;
    ordered_json ads = ordered_json::array();
    for (const auto& a : inst.advertisers) {
        ordered_json item;
        item["id"] = a.id;
        item["bid"] = a.bid;
        item["quality"] = a.quality;
        item["brand"] = a.brand;
        ads.push_back(item);
    }
    doc["advertisers"] = ads;
    if (inst.params) {
        ordered_json params;
        params["lambda"] = inst.params->lambda;
        params["nu"] = inst.params->nu;
        doc["params"] = params;
    }
    return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// report writer: fixed field order, numbers at 12 significant digits

namespace {

std::string fmt_num(double x) {
    if (x == 0.0) return "0";  // avoid "-0"
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

/// Serializer for the report schema: writes keys in insertion order and
/// formats every number through fmt_num so golden files stay meaningful.
class ReportWriter {
public:
    ReportWriter& key(const std::string& k) {
        sep();
        out_ << '"' << json_escape(k) << "\":";
        pending_value_ = true;
        return *this;
    }
    ReportWriter& value(double x) { return raw(fmt_num(x)); }
    ReportWriter& value(std::size_t x) { return raw(std::to_string(x)); }
    ReportWriter& value(int x) { return raw(std::to_string(x)); }
    ReportWriter& value(bool b) { return raw(b ? "true" : "false"); }
    ReportWriter& value(const std::string& s) { return raw('"' + json_escape(s) + '"'); }
    ReportWriter& value(const char* s) { return raw('"' + json_escape(s) + '"'); }

    ReportWriter& begin_object() { return open('{'); }
    ReportWriter& end_object() { return close('}'); }
    ReportWriter& begin_array() { return open('['); }
    ReportWriter& end_array() { return close(']'); }

    template <typename T>
    ReportWriter& array(const std::vector<T>& xs) {
        begin_array();
        for (const auto& x : xs) value(x);
        return end_array();
    }

    std::string str() const { return out_.str() + "\n"; }

private:
    ReportWriter& raw(const std::string& text) {
        sep();
        out_ << text;
        first_ = false;
        return *this;
    }
    ReportWriter& open(char c) {
        sep();
        out_ << c;
        first_ = true;
        return *this;
    }
    ReportWriter& close(char c) {
        out_ << c;
        first_ = false;
        pending_value_ = false;
        return *this;
    }
    void sep() {
        if (pending_value_) {
            pending_value_ = false;
            return;
        }
        if (!first_) out_ << ',';
        first_ = false;
    }

    std::ostringstream out_;
    bool first_ = true;
    bool pending_value_ = false;
};

// ---------------------------------------------------------------------------
// CLI plumbing

std::string read_all(std::istream& in) {
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string load_document(const std::string& file, std::istream& in) {
    if (file.empty() || file == "-") return read_all(in);
    std::ifstream f(file);
    if (!f) throw_error(Errc::usage_error, "cannot open '" + file + "'");
    return read_all(f);
}

struct ModelChoice {
    ClickModel model;
    std::string label;
};

ModelChoice infer_model(const AuctionInstance& inst) {
    if (inst.has_brand_profile()) return {ClickModel::brand(), "brand"};
    if (inst.params) return {ClickModel::externality(*inst.params), "externality"};
    return {ClickModel::separable(), "separable"};
}

std::vector<std::string> rate_warnings(const AuctionInstance& inst, const Allocation& alloc,
                                       const ClickModel& model) {
    std::vector<std::string> warnings;
    std::vector<double> rates = model.slot_rates(inst, alloc);
    for (std::size_t j = 0; j < rates.size(); ++j) {
        if (rates[j] > 1.0) {
            std::ostringstream ss;
            ss << "click rate " << fmt_num(rates[j]) << " at position " << (j + 1)
               << " exceeds 1; treat rates as uncalibrated";
            warnings.push_back(ss.str());
        }
    }
    return warnings;
}

void write_welfare(ReportWriter& w, const WelfareReport& report) {
    w.key("welfare").begin_object();
    w.key("total").value(report.total);
    w.key("per_slot").array(report.per_slot);
    w.key("model").value(report.model);
    w.key("method").value(report.method);
    w.end_object();
}

void write_csv(const std::string& path, const AuctionInstance& inst, const Allocation& alloc,
               const ClickModel& model, const PriceSchedule* prices) {
    std::ofstream f(path);
    if (!f) throw_error(Errc::usage_error, "cannot write '" + path + "'");
    std::vector<double> rates = model.slot_rates(inst, alloc);
    f << "position,id,bid,quality,click_rate,price,contribution\n";
    for (std::size_t j = 0; j < alloc.shown(); ++j) {
        const Advertiser& a = inst.require(alloc.slots[j]);
        std::string price;
        if (prices) {
            for (const auto& e : prices->entries)
                if (e.position == j) price = fmt_num(e.cost_per_click);
        }
        f << (j + 1) << ',' << a.id << ',' << fmt_num(a.bid) << ',' << fmt_num(a.quality) << ','
          << fmt_num(rates[j]) << ',' << price << ',' << fmt_num(a.bid * rates[j]) << '\n';
    }
}

int cmd_validate(const std::string& file, std::istream& in, std::ostream& out) {
    std::string text = load_document(file, in);
    ReportWriter w;
    w.begin_object();
    w.key("command").value("validate");
    try {
        parse_instance(text);
        w.key("valid").value(true);
        w.key("errors").begin_array().end_array();
        w.end_object();
        out << w.str();
        return 0;
    } catch (const AuctionError& e) {
        w.key("valid").value(false);
        w.key("errors").begin_array();
        w.value(std::string(e.what()));
        w.end_array();
        w.end_object();
        out << w.str();
        return 1;
    }
}

int cmd_allocate(const std::string& file, std::string model_name, std::string method,
                 const std::string& csv_path, std::istream& in, std::ostream& out) {
    AuctionInstance inst = parse_instance(load_document(file, in));

    if (model_name == "separable" || model_name == "externality") {
        if (!inst.positions)
            throw_error(Errc::model_profile_mismatch,
                        "--model " + model_name + " needs a plain position profile");
    } else if (model_name == "brand") {
        if (!inst.brand_positions)
            throw_error(Errc::model_profile_mismatch, "--model brand needs a brand profile");
    } else {
        throw_error(Errc::usage_error, "unknown model '" + model_name + "'");
    }

    if (method == "auto")
        method = model_name == "externality" ? "bisection"
                 : model_name == "brand"     ? "enumerate"
                                             : "rank";

    const bool extern_method = method == "bisection" || method == "brute";
    const bool brand_method = method == "enumerate" || method == "greedy" || method == "fastpath";
    if (!extern_method && !brand_method && method != "rank")
        throw_error(Errc::usage_error, "unknown method '" + method + "'");
    if ((extern_method && model_name != "externality") || (brand_method && model_name != "brand"))
        throw_error(Errc::usage_error,
                    "--method " + method + " conflicts with --model " + model_name);

    if (model_name == "externality" && !inst.params)
        throw_error(Errc::invalid_params,
                    "--model externality needs 'params' with lambda in the instance");
    ClickModel model = model_name == "separable" ? ClickModel::separable()
                       : model_name == "brand"   ? ClickModel::brand()
                                                 : ClickModel::externality(*inst.params);

    Allocation alloc;
    const BisectionState* state = nullptr;
    const std::vector<AdvertiserId>* skipped = nullptr;
    double s_star = 0.0;
    bool have_s_star = false;
    ExternAllocationResult extern_result;

    if (method == "rank") {
        alloc = ecpm_ranking(inst);
    } else if (method == "bisection" || method == "brute") {
        double lambda = inst.params->lambda;
        extern_result = method == "bisection" ? bisection_allocate(inst, lambda)
                                              : brute_force_allocate(inst, lambda);
        alloc = extern_result.allocation;
        state = &extern_result.state;
        skipped = &extern_result.skipped;
        s_star = extern_result.s_star;
        have_s_star = true;
    } else if (method == "enumerate") {
        alloc = optimal_brand_allocate(inst).first;
    } else if (method == "greedy") {
        alloc = greedy_brand_allocate(inst).first;
    } else {
        alloc = brand_last_fastpath(inst).first;
    }

    WelfareReport report = welfare(alloc, inst, model, method);

    ReportWriter w;
    w.begin_object();
    w.key("command").value("allocate");
    w.key("model").value(model_name);
    w.key("method").value(method);
    w.key("allocation").array(alloc.slots);
    write_welfare(w, report);
    w.key("diagnostics").begin_object();
    w.key("iterations").value(state ? state->iterations : std::size_t{0});
    if (have_s_star) {
        w.key("s_lower").value(state->lower);
        w.key("s_upper").value(state->upper);
        w.key("s_star").value(s_star);
    }
    w.key("skipped").array(skipped ? *skipped : std::vector<AdvertiserId>{});
    w.key("warnings").array(rate_warnings(inst, alloc, model));
    w.end_object();
    w.end_object();
    out << w.str();

    if (!csv_path.empty()) write_csv(csv_path, inst, alloc, model, nullptr);
    return 0;
}

int cmd_price(const std::string& file, const std::string& rule, double tol,
              const std::string& csv_path, std::istream& in, std::ostream& out) {
    AuctionInstance inst = parse_instance(load_document(file, in));
    ModelChoice choice = infer_model(inst);

    Allocator allocate;
    if (choice.label == "brand")
        allocate = brand_optimal_allocator();
    else if (choice.label == "externality")
        allocate = externality_allocator(inst.params->lambda);
    else
        allocate = ecpm_allocator();

    Allocation alloc = allocate(inst);
    PriceSchedule schedule = price_schedule(inst, allocate, choice.model, rule, tol);

    ReportWriter w;
    w.begin_object();
    w.key("command").value("price");
    w.key("model").value(choice.label);
    w.key("rule").value(rule);
    w.key("allocation").array(alloc.slots);
    w.key("prices").begin_array();
    for (const auto& e : schedule.entries) {
        w.begin_object();
        w.key("id").value(e.id);
        w.key("position").value(e.position + 1);
        w.key("cost_per_click").value(e.cost_per_click);
        w.key("rule").value(e.rule);
        w.end_object();
    }
    w.end_array();
    w.key("diagnostics").begin_object();
    w.key("warnings").array(rate_warnings(inst, alloc, choice.model));
    w.end_object();
    w.end_object();
    out << w.str();

    if (!csv_path.empty()) write_csv(csv_path, inst, alloc, choice.model, &schedule);
    return 0;
}

int cmd_compare_revenue(const std::string& file, double lambda, std::istream& in,
                        std::ostream& out) {
    AuctionInstance inst = parse_instance(load_document(file, in));
    RevenueComparison cmp = revenue_compare(inst, lambda);

    ReportWriter w;
    w.begin_object();
    w.key("command").value("compare-revenue");
    w.key("lambda").value(lambda);
    w.key("allocations_identical").value(cmp.allocations_identical);
    w.key("allocation").array(cmp.allocation.slots);
    w.key("rows").begin_array();
    for (const auto& row : cmp.rows) {
        w.begin_object();
        w.key("position").value(row.position + 1);
        w.key("price_separable").value(row.price_separable);
        w.key("price_externality").value(row.price_externality);
        w.key("delta").value(row.delta);
        w.key("quality_sign").value(row.quality_sign);
        w.end_object();
    }
    w.end_array();
    w.end_object();
    out << w.str();
    return 0;
}

int cmd_check_axioms(const std::string& model_name, double lambda, double nu, std::ostream& out) {
    ClickModel model = model_name == "separable"
                           ? ClickModel::separable()
                           : ClickModel::externality({lambda, nu});
    const std::size_t s = 3;
    const std::vector<double> n_vec{1.0, 0.6, 0.3};
    const std::vector<double> grid{0.0, 0.25, 0.5, 0.75, 1.0};

    AxiomReport report = check_axioms(as_ctr_function(model), s, grid, n_vec);

    ReportWriter w;
    w.begin_object();
    w.key("command").value("check-axioms");
    w.key("model").value(model_name);
    if (model_name != "separable") {
        w.key("lambda").value(lambda);
        w.key("nu").value(nu);
    }
    w.key("slots").value(s);
    w.key("grid").array(grid);
    w.key("axioms").begin_object();
    for (std::size_t i = 0; i < 5; ++i)
        w.key("A" + std::to_string(i + 1)).value(verdict_name(report.axioms[i].verdict));
    w.end_object();
    w.key("witnesses").begin_array();
    for (const auto& check : report.axioms)
        for (const auto& witness : check.witnesses)
            w.value(witness.axiom + ": " + witness.detail);
    w.end_array();
    w.end_object();
    out << w.str();
    return report.all_hold() ? 0 : 1;
}

int cmd_gen(const std::string& which, double epsilon, std::ostream& out) {
    AuctionInstance inst;
    if (which == "greedy-tight")
        inst = make_tight_greedy_instance(epsilon);
    else if (which == "greedy-vs-standard")
        inst = make_greedy_vs_standard_instance(epsilon);
    else
        throw_error(Errc::usage_error, "unknown case '" + which + "'");
    out << emit_instance(inst);
    return 0;
}

int cmd_ratio(const std::string& file, std::istream& in, std::ostream& out) {
    AuctionInstance inst = parse_instance(load_document(file, in));
    auto [greedy_alloc, greedy_welfare] = greedy_brand_allocate(inst);
    auto [optimal_alloc, optimal_welfare] = optimal_brand_allocate(inst);
    double ratio = greedy_ratio(inst);

    ReportWriter w;
    w.begin_object();
    w.key("command").value("ratio");
    w.key("greedy").value(greedy_welfare);
    w.key("optimal").value(optimal_welfare);
    w.key("ratio").value(ratio);
    w.key("greedy_allocation").array(greedy_alloc.slots);
    w.key("optimal_allocation").array(optimal_alloc.slots);
    w.end_object();
    out << w.str();
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
    CLI::App app{"position auction allocation and pricing toolkit"};
    app.require_subcommand(1);

    std::string file, model, method = "auto", rule = "maintaining", gen_case, csv_path;
    double lambda = 1.0, nu = 1.0, epsilon = 0.0, tol = 1e-9;

    auto* validate_cmd = app.add_subcommand("validate", "check an instance document");
    validate_cmd->add_option("file", file, "instance document (default: stdin)");

    auto* allocate_cmd = app.add_subcommand("allocate", "compute an allocation");
    allocate_cmd->add_option("file", file, "instance document (default: stdin)");
    allocate_cmd->add_option("--model", model, "separable|externality|brand")->required();
    allocate_cmd->add_option("--method", method, "rank|bisection|brute|enumerate|greedy|fastpath");
    allocate_cmd->add_option("--csv", csv_path, "also write per-slot rows to this file");

    auto* price_cmd = app.add_subcommand("price", "compute cost-per-click prices");
    price_cmd->add_option("file", file, "instance document (default: stdin)");
    price_cmd->add_option("--rule", rule, "maintaining|swap")->required();
    price_cmd->add_option("--tol", tol, "bid-search tolerance (default 1e-9)");
    price_cmd->add_option("--csv", csv_path, "also write per-slot rows to this file");

    auto* compare_cmd = app.add_subcommand("compare-revenue",
                                           "price the same allocation under both models");
    compare_cmd->add_option("file", file, "instance document (default: stdin)");
    compare_cmd->add_option("--lambda", lambda, "externality strength")->required();

    auto* axioms_cmd = app.add_subcommand("check-axioms", "grid-check axioms A1-A5");
    axioms_cmd->add_option("--model", model, "separable|practical")->required();
    auto* lambda_opt = axioms_cmd->add_option("--lambda", lambda, "externality strength");
    axioms_cmd->add_option("--nu", nu, "calibration scale");

    auto* gen_cmd = app.add_subcommand("gen", "emit a worst-case instance");
    gen_cmd->add_option("--case", gen_case, "greedy-tight|greedy-vs-standard")->required();
    gen_cmd->add_option("--epsilon", epsilon, "instance parameter")->required();

    auto* ratio_cmd = app.add_subcommand("ratio", "greedy welfare over optimal welfare");
    ratio_cmd->add_option("file", file, "instance document (default: stdin)");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            // --help and friends
            out << app.help();
            return 0;
        }
        err << "error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (validate_cmd->parsed()) return cmd_validate(file, in, out);
        if (allocate_cmd->parsed()) return cmd_allocate(file, model, method, csv_path, in, out);
        if (price_cmd->parsed()) return cmd_price(file, rule, tol, csv_path, in, out);
        if (compare_cmd->parsed()) return cmd_compare_revenue(file, lambda, in, out);
        if (axioms_cmd->parsed()) {
            if (model != "separable" && model != "practical")
                throw_error(Errc::usage_error, "check-axioms --model must be separable|practical");
            if (model == "separable" && lambda_opt->count() > 0)
                throw_error(Errc::usage_error, "--lambda conflicts with --model separable");
            return cmd_check_axioms(model, lambda, nu, out);
        }
        if (gen_cmd->parsed()) return cmd_gen(gen_case, epsilon, out);
        if (ratio_cmd->parsed()) return cmd_ratio(file, in, out);
        err << "error: no subcommand\n";
        return 1;
    } catch (const InvariantViolation& e) {
        err << "invariant violation: " << e.what() << "\n";
        return 2;
    } catch (const AuctionError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace posauction
