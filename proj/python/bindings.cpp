#include "somps/error.hpp"
#include "somps/featurize/connectivity.hpp"
#include "somps/featurize/embedding.hpp"
#include "somps/harness/artifacts.hpp"
#include "somps/harness/metrics.hpp"
#include "somps/harness/pipeline.hpp"
#include "somps/harness/report.hpp"
#include "somps/harness/run_config.hpp"
#include "somps/harness/split.hpp"
#include "somps/ingest/corpus.hpp"
#include "somps/ingest/synthetic.hpp"
#include "somps/neural/layers.hpp"
#include "somps/neural/model.hpp"
#include "somps/version.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

namespace py = pybind11;
using namespace somps;

namespace {

py::dict metrics_dict(const EvalReport& r) {
    py::dict d;
    const auto& m = r.metrics;
    d["accuracy"] = m.accuracy;
    d["f1_real"] = m.f1_real;
    d["f1_fake"] = m.f1_fake;
    d["f1_macro"] = m.f1_macro;
    d["mean_loss"] = r.mean_loss;
    d["confusion"] = py::dict(py::arg("tp") = m.confusion.tp, py::arg("fp") = m.confusion.fp,
                              py::arg("fn") = m.confusion.fn, py::arg("tn") = m.confusion.tn);
    d["probabilities"] = r.probabilities;
    return d;
}

RunConfig make_config(const std::string& text, const std::vector<std::string>& overrides) {
    auto config = parse_run_config(text);
    for (const auto& o : overrides) apply_override(config, o);
    config.validate();
    return config;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of the SOMPS-Net fake health news detector";
    m.attr("__version__") = std::string(kVersion);

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ParseError>(m, "ParseError", base.ptr());
    py::register_exception<ValidationError>(m, "ValidationError", base.ptr());
    py::register_exception<ArgumentError>(m, "ArgumentError", base.ptr());
    py::register_exception<StateError>(m, "StateError", base.ptr());
    py::register_exception<SplitError>(m, "SplitError", base.ptr());
    py::register_exception<TrainingError>(m, "TrainingError", base.ptr());

    py::class_<Corpus>(m, "Corpus")
        .def("__len__", &Corpus::size)
        .def_property_readonly("news_ids",
                               [](const Corpus& c) {
                                   std::vector<std::string> ids;
                                   for (const auto& n : c.news()) ids.push_back(n.news_id);
                                   return ids;
                               })
        .def_property_readonly("labels",
                               [](const Corpus& c) {
                                   std::vector<int> labels;
                                   for (const auto& n : c.news()) labels.push_back(to_int(n.label));
                                   return labels;
                               })
        .def("engagement_count", [](const Corpus& c, const std::string& id) { return c.engagements_of(id).size(); })
        .def("user_count", [](const Corpus& c) { return c.users().size(); })
        .def("to_bytes",
             [](const Corpus& c) {
                 std::ostringstream out;
                 save_corpus(c, out);
                 return py::bytes(out.str());
             })
        .def("save", [](const Corpus& c, const std::filesystem::path& p) { save_corpus(c, p); })
        .def("write_jsonl", [](const Corpus& c, const std::filesystem::path& dir) { write_corpus_jsonl(c, dir); });

    m.def("read_corpus", py::overload_cast<const std::filesystem::path&>(&read_corpus), py::arg("path"));
    m.def("load_corpus", &load_corpus, py::arg("news"), py::arg("engagements"), py::arg("users"));
    m.def("filter_eligible", &filter_eligible, py::arg("corpus"));
    m.def(
        "generate_synthetic",
        [](std::size_t n, double fake_fraction, std::uint64_t seed, double signal,
           std::optional<std::pair<double, double>> window) {
            SyntheticOptions o;
            o.n_articles = n;
            o.fake_fraction = fake_fraction;
            o.seed = seed;
            o.signal_strength = signal;
            o.signal_window_hours = window;
            return generate_synthetic(o);
        },
        py::arg("n_articles"), py::arg("fake_fraction") = 0.3, py::arg("seed") = 0, py::arg("signal_strength") = 1.0,
        py::arg("signal_window_hours") = py::none());

    py::class_<EmbeddingTable>(m, "EmbeddingTable")
        .def_static("load", &EmbeddingTable::load, py::arg("path"))
        .def_static("random", &EmbeddingTable::random, py::arg("tokens"), py::arg("dim"), py::arg("seed"))
        .def_static("synthetic",
                    [](std::size_t dim, std::uint64_t seed) {
                        return EmbeddingTable::random(synthetic_vocabulary(), dim, seed);
                    },
                    py::arg("dim") = 100, py::arg("seed") = 0)
        .def("save", &EmbeddingTable::save, py::arg("path"))
        .def_property_readonly("dim", &EmbeddingTable::dim)
        .def("__len__", &EmbeddingTable::size)
        .def("lookup", [](const EmbeddingTable& t, const std::string& tok) { return Eigen::VectorXd(t.lookup(tok).transpose()); });

    m.def("tokenize", &tokenize, py::arg("text"));
    m.def(
        "connectivity_score",
        [](std::vector<std::string> fx, std::vector<std::string> gx, std::vector<std::string> fy,
           std::vector<std::string> gy) {
            auto prep = [](std::vector<std::string>& v) {
                std::sort(v.begin(), v.end());
                v.erase(std::unique(v.begin(), v.end()), v.end());
            };
            UserRecord x, y;
            for (auto* v : {&fx, &gx, &fy, &gy}) prep(*v);
            x.follower_ids = std::move(fx);
            x.following_ids = std::move(gx);
            y.follower_ids = std::move(fy);
            y.following_ids = std::move(gy);
            return connectivity_score(x, y);
        },
        py::arg("followers_x"), py::arg("following_x"), py::arg("followers_y"), py::arg("following_y"));
    m.def("normalize_adjacency", &normalize_adjacency, py::arg("adjacency"));

    m.def(
        "stratified_split",
        [](const Corpus& corpus, double train, double val, double test, std::uint64_t seed) {
            const auto s = stratified_split(corpus, SplitSpec{train, val, test, seed});
            return py::dict(py::arg("train") = s.train, py::arg("val") = s.val, py::arg("test") = s.test);
        },
        py::arg("corpus"), py::arg("train") = 0.75, py::arg("val") = 0.10, py::arg("test") = 0.15, py::arg("seed") = 0);

    m.def(
        "compute_metrics",
        [](const std::vector<int>& labels, const std::vector<int>& predictions) {
            const auto mm = compute_metrics(labels, predictions);
            return py::dict(py::arg("accuracy") = mm.accuracy, py::arg("f1_real") = mm.f1_real,
                            py::arg("f1_fake") = mm.f1_fake, py::arg("f1_macro") = mm.f1_macro);
        },
        py::arg("labels"), py::arg("predictions"));

    m.def("config_keys", &run_config_keys);
    m.def(
        "config_echo", [](const std::string& text, const std::vector<std::string>& overrides) {
            return config_echo(make_config(text, overrides));
        },
        py::arg("text") = "", py::arg("overrides") = std::vector<std::string>{});

    m.def(
        "run_experiment",
        [](const Corpus& corpus, const EmbeddingTable& table, const std::string& config_text,
           const std::vector<std::string>& overrides) {
            const auto config = make_config(config_text, overrides);
            ExperimentResult r;
            {
                py::gil_scoped_release release;
                r = run_experiment(corpus, table, config);
            }
            py::dict out;
            out["splits"] = py::dict(py::arg("train") = r.splits.train, py::arg("val") = r.splits.val,
                                     py::arg("test") = r.splits.test);
            out["train"] = metrics_dict(r.train_report);
            out["val"] = metrics_dict(r.val_report);
            out["test"] = metrics_dict(r.test_report);
            out["epochs"] = r.training.log.epochs.size();
            out["best_epoch"] = r.training.log.best_epoch;
            out["report_json"] = report_json(r.test_report, config_echo(config), "test");
            std::ostringstream ck;
            write_checkpoint({config_echo(config), config.variant, config.model,
                              feature_dims(r.features.articles.front()), r.training.params,
                              r.training.log.best_epoch},
                             ck);
            out["checkpoint"] = py::bytes(ck.str());
            return out;
        },
        py::arg("corpus"), py::arg("embeddings"), py::arg("config") = "",
        py::arg("overrides") = std::vector<std::string>{});
}
