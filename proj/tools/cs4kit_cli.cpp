// Command-line front end: evaluate formulas on models, classify frames,
// quotient by bisimulations, search for countermodels, check proofs.
//
// Exit codes: 0 answered, 1 negative finding (formula falsified, countermodel
// found, proof rejected, soundness violation), 2 usage or input error,
// 3 search budget exhausted.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cs4kit/cs4kit.hpp"

namespace {

constexpr int kExitAnswered = 0;
constexpr int kExitNegative = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBudget = 3;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

cs4kit::Model load_model(const std::string& path) {
    cs4kit::RawModel raw = cs4kit::parse_model_text(slurp(path));
    cs4kit::ValidateResult res = cs4kit::validate(raw);
    if (!res.ok()) {
        std::ostringstream msg;
        msg << "model '" << path << "' is not valid:";
        for (const auto& d : res.diagnostics)
            msg << "\n  " << d.constraint << ": " << d.witness;
        throw InputError(msg.str());
    }
    return *std::move(res.model);
}

cs4kit::Logic parse_logic_arg(const std::string& s) {
    auto l = cs4kit::parse_logic(s);
    if (!l) throw InputError("unknown logic '" + s + "' (expected CS4, IS4, S4I, GS4)");
    return *l;
}

struct Out {
    bool tagged = false;

    void result(const std::string& key, const std::string& value) {
        if (tagged)
            std::cout << "RESULT " << key << "=" << value << "\n";
        else
            std::cout << value << "\n";
    }
    void line(const std::string& tag, const std::string& text) {
        if (tagged)
            std::cout << tag << " " << text << "\n";
        else
            std::cout << text << "\n";
    }
    void model(const cs4kit::Model& m) {
        if (tagged) std::cout << "MODEL\n";
        std::cout << cs4kit::print_model_text(m);
    }
};

std::string flag_string(bool b) { return b ? "true" : "false"; }

std::string classes_string(const cs4kit::FrameReport& rep) {
    auto classes = rep.classes();
    if (classes.empty()) return "(none)";
    std::string s;
    for (auto l : classes) {
        if (!s.empty()) s += ' ';
        s += cs4kit::to_string(l);
    }
    return s;
}

std::string witness_string(const std::vector<std::string>& w) {
    std::string s = "(";
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i) s += ",";
        s += w[i];
    }
    return s + ")";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"toolkit for the constructive modal logics CS4, IS4, S4I and GS4"};
    app.require_subcommand(1);
    bool tagged = false;
    app.add_flag("--tagged", tagged, "machine-readable line-prefixed output");

    std::string model_path, formula_str, logic_str = "CS4", sigma_str, world_name;
    std::string proof_path;
    int max_worlds = 3;
    long max_candidates = -1;
    int height_cap = -1;
    std::uint64_t seed = 0;
    bool strong = false;
    int size = 4, variables = 2, instances = 5, models = 200;
    double density = 0.3;
    unsigned bound_height = 0, sigma_size = 1;
    std::string count_str;

    auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula at a world");
    eval_cmd->add_option("--model", model_path)->required();
    eval_cmd->add_option("--world", world_name)->required();
    eval_cmd->add_option("--formula", formula_str)->required();

    auto* validity_cmd = app.add_subcommand("validity", "check a formula on every world");
    validity_cmd->add_option("--model", model_path)->required();
    validity_cmd->add_option("--formula", formula_str)->required();

    auto* classify_cmd = app.add_subcommand("classify", "frame conditions and classes");
    classify_cmd->add_option("--model", model_path)->required();

    auto* height_cmd = app.add_subcommand("height", "longest strict intuit chain");
    height_cmd->add_option("--model", model_path)->required();
    height_cmd->add_option("--world", world_name);

    auto* quotient_cmd = app.add_subcommand("quotient", "quotient by the greatest bisimulation");
    quotient_cmd->add_option("--model", model_path)->required();
    quotient_cmd->add_option("--sigma", sigma_str)->required();
    quotient_cmd->add_flag("--strong", strong);

    auto* finitize_cmd = app.add_subcommand("finitize", "class-preserving quotient");
    finitize_cmd->add_option("--model", model_path)->required();
    finitize_cmd->add_option("--sigma", sigma_str)->required();
    finitize_cmd->add_option("--logic", logic_str)->required();

    auto* bound_cmd = app.add_subcommand("bound", "bisimulation class-count bound");
    bound_cmd->add_option("--height", bound_height)->required();
    bound_cmd->add_option("--sigma-size", sigma_size)->required();
    bound_cmd->add_option("--count", count_str);

    auto* counter_cmd = app.add_subcommand("countermodel", "bounded countermodel search");
    counter_cmd->add_option("--logic", logic_str)->required();
    counter_cmd->add_option("--formula", formula_str)->required();
    counter_cmd->add_option("--max-worlds", max_worlds);
    counter_cmd->add_option("--max-candidates", max_candidates);
    counter_cmd->add_option("--height-cap", height_cap);

    auto* exhaustive_cmd = app.add_subcommand("exhaustive", "bounded validity sweep");
    exhaustive_cmd->add_option("--logic", logic_str)->required();
    exhaustive_cmd->add_option("--formula", formula_str)->required();
    exhaustive_cmd->add_option("--max-worlds", max_worlds);

    auto* soundness_cmd = app.add_subcommand("soundness", "axiom soundness suite");
    soundness_cmd->add_option("--logic", logic_str)->required();
    soundness_cmd->add_option("--models", models);
    soundness_cmd->add_option("--instances", instances);
    soundness_cmd->add_option("--seed", seed);
    soundness_cmd->add_option("--size", size);
    soundness_cmd->add_option("--density", density);
    soundness_cmd->add_option("--vars", variables);

    auto* proof_cmd = app.add_subcommand("proof-check", "check a Hilbert proof");
    proof_cmd->add_option("--logic", logic_str)->required();
    proof_cmd->add_option("--proof", proof_path)->required();

    auto* gen_cmd = app.add_subcommand("gen", "random model in a class");
    gen_cmd->add_option("--logic", logic_str)->required();
    gen_cmd->add_option("--size", size);
    gen_cmd->add_option("--density", density);
    gen_cmd->add_option("--vars", variables);
    gen_cmd->add_option("--seed", seed);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    Out out{tagged};
    using namespace cs4kit;

    try {
        if (eval_cmd->parsed()) {
            Model m = load_model(model_path);
            auto w = m.world_index(world_name);
            if (!w) throw InputError("unknown world '" + world_name + "'");
            bool value = eval(m, *w, parse(formula_str));
            out.result("value", flag_string(value));
            return value ? kExitAnswered : kExitNegative;
        }

        if (validity_cmd->parsed()) {
            Model m = load_model(model_path);
            auto w = falsifying_world(m, parse(formula_str));
            if (!w) {
                out.result("valid", "true");
                return kExitAnswered;
            }
            out.result("valid", "false");
            out.result("world", m.worlds[*w]);
            return kExitNegative;
        }

        if (classify_cmd->parsed()) {
            Model m = load_model(model_path);
            FrameReport rep = classify(m);
            auto show = [&](const char* name, bool value, FrameCondition c) {
                std::string text = std::string(name) + ": " + flag_string(value);
                if (!value) {
                    auto r = check_condition(m, c);
                    text += " witness " + witness_string(r.witness);
                }
                out.line("CONDITION", text);
            };
            show("forward_confluent", rep.forward_confluent, FrameCondition::Forward);
            show("backward_confluent", rep.backward_confluent, FrameCondition::Backward);
            show("downward_confluent", rep.downward_confluent, FrameCondition::Downward);
            show("locally_linear", rep.locally_linear, FrameCondition::LocallyLinear);
            show("forest_like", rep.forest_like, FrameCondition::ForestLike);
            show("infallible", rep.infallible, FrameCondition::Infallible);
            out.line("CLASSES", "classes: " + classes_string(rep));
            return kExitAnswered;
        }

        if (height_cmd->parsed()) {
            Model m = load_model(model_path);
            if (world_name.empty()) {
                out.result("height", std::to_string(height(m)));
            } else {
                auto w = m.world_index(world_name);
                if (!w) throw InputError("unknown world '" + world_name + "'");
                out.result("height", std::to_string(world_height(m, *w)));
            }
            return kExitAnswered;
        }

        if (quotient_cmd->parsed()) {
            Model m = load_model(model_path);
            SubformulaSet sigma = SubformulaSet::closure(parse(sigma_str));
            Partition part =
                strong ? greatest_strong_bisim(m, sigma) : greatest_bisim(m, sigma);
            out.result("classes", std::to_string(part.num_classes()));
            for (const auto& cls : part.classes) {
                std::string members;
                for (int w : cls) {
                    if (!members.empty()) members += ' ';
                    members += m.worlds[w];
                }
                out.line("CLASS", m.worlds[cls.front()] + ": " + members);
            }
            out.model(quotient(m, part, &sigma));
            return kExitAnswered;
        }

        if (finitize_cmd->parsed()) {
            Model m = load_model(model_path);
            SubformulaSet sigma = SubformulaSet::closure(parse(sigma_str));
            Model q = finitize(m, sigma, parse_logic_arg(logic_str));
            out.result("worlds", std::to_string(q.size()));
            out.model(q);
            return kExitAnswered;
        }

        if (bound_cmd->parsed()) {
            Tower t = bisim_bound(bound_height, sigma_size);
            out.result("bound", to_string(t));
            if (auto v = materialize(t))
                out.result("value", v->str());
            else
                out.result("value", "(exceeds the materialization threshold)");
            if (!count_str.empty()) {
                BigNat n(count_str);
                out.result("count_le_bound", flag_string(le_tower(n, t)));
            }
            return kExitAnswered;
        }

        if (counter_cmd->parsed()) {
            SearchBudget budget;
            budget.max_worlds = max_worlds;
            budget.max_candidates = max_candidates;
            if (height_cap >= 0) budget.height_cap = height_cap;
            CountermodelResult r =
                find_countermodel(parse(formula_str), parse_logic_arg(logic_str), budget);
            out.result("candidates", std::to_string(r.stats.candidates));
            switch (r.status) {
                case CountermodelResult::Status::Found:
                    out.result("countermodel", "found");
                    out.result("world", r.model->worlds[*r.world]);
                    out.model(*r.model);
                    return kExitNegative;
                case CountermodelResult::Status::NoneFound:
                    out.result("countermodel",
                               "none with at most " + std::to_string(max_worlds) + " worlds");
                    return kExitAnswered;
                case CountermodelResult::Status::BudgetExhausted:
                    out.line("BUDGET", "budget exhausted before the sweep finished");
                    return kExitBudget;
            }
        }

        if (exhaustive_cmd->parsed()) {
            Formula f = parse(formula_str);
            Logic logic = parse_logic_arg(logic_str);
            if (check_validity_upto(f, logic, max_worlds)) {
                out.result("valid_upto", std::to_string(max_worlds));
                return kExitAnswered;
            }
            SearchBudget budget;
            budget.max_worlds = max_worlds;
            CountermodelResult r = find_countermodel(f, logic, budget);
            out.result("valid_upto", "refuted");
            if (r.model) {
                out.result("world", r.model->worlds[*r.world]);
                out.model(*r.model);
            }
            return kExitNegative;
        }

        if (soundness_cmd->parsed()) {
            SoundnessParams sp;
            sp.logic = parse_logic_arg(logic_str);
            sp.models = models;
            sp.instances_per_axiom = instances;
            sp.seed = seed;
            sp.max_size = size;
            sp.edge_density = density;
            sp.variables = variables;
            SoundnessReport rep = soundness_suite(sp);
            std::cout << rep.to_text();
            return rep.violations.empty() ? kExitAnswered : kExitNegative;
        }

        if (proof_cmd->parsed()) {
            Proof proof = parse_proof_text(slurp(proof_path));
            CheckResult r = check_proof(parse_logic_arg(logic_str), proof);
            if (r.accepted) {
                out.result("proof",
                           "accepted (" + std::to_string(proof.lines.size()) + " lines)");
                return kExitAnswered;
            }
            out.result("proof",
                       "rejected at line " + std::to_string(r.line) + ": " + r.reason);
            return kExitNegative;
        }

        if (gen_cmd->parsed()) {
            GenParams gp;
            gp.logic = parse_logic_arg(logic_str);
            gp.size = size;
            gp.edge_density = density;
            gp.variable_count = variables;
            gp.seed = seed;
            out.model(random_model(gp));
            return kExitAnswered;
        }
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const cs4kit::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
