#include "pyrafuse/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <sstream>

#include "pyrafuse/attributes.hpp"
#include "pyrafuse/error.hpp"
#include "pyrafuse/fusion.hpp"
#include "pyrafuse/io.hpp"
#include "pyrafuse/pyramid.hpp"
#include "pyrafuse/synth.hpp"
#include "text.hpp"

namespace pyrafuse {

namespace fs = std::filesystem;

namespace {

struct Options {
    std::string input;
    std::vector<std::string> inputs;
    std::string out;

    std::size_t scales = 4;
    double sigma = 1.0;
    std::size_t radius = 2;

    std::string attr = "dip";
    double velocity = kDefaultVelocity;
    double pmax = DipParams{}.p_max;
    std::size_t time_index = 0;
    bool has_time_index = false;

    std::string fuse = "median";
    std::vector<double> weights;
    std::size_t rank = 0;
    double weight_bias = 2.0;

    int segy_format = 0;
    std::string byte_order = "big";
    std::size_t max_traces = 0;
    double dx = 25.0;
    double dy = 25.0;

    double clip_lo = 2.0;
    double clip_hi = 98.0;
};

// "a/b.pfg" + "L2" -> "a/b.L2.pfg"
fs::path tagged(const fs::path& path, const std::string& tag) {
    fs::path p = path;
    const std::string ext = p.extension().string();
    p.replace_extension();
    p += "." + tag + ext;
    return p;
}

PyramidParams pyramid_params(const Options& o) { return {o.scales, o.sigma, o.radius}; }

AttributeParams attribute_params(const Options& o) {
    AttributeParams p;
    p.velocity = o.velocity;
    p.dip.p_max = o.pmax;
    if (o.has_time_index) p.time_index = o.time_index;
    return p;
}

FusionSpec fusion_spec(const Options& o, std::size_t scales) {
    FusionSpec spec;
    spec.method = parse_fusion_method(o.fuse);
    if (spec.method == FusionMethod::WeightedMean) {
        spec.weights = o.weights.empty() ? default_weights(scales, o.weight_bias) : o.weights;
    }
    spec.rank = o.rank;
    return spec;
}

class Runner {
public:
    Runner(const Options& o, std::ostream& out, std::ostream& err) : o_(o), out_(out), err_(err) {}

    void synth() {
        const SynthSpec spec = parse_synth_spec(read_file(o_.input));
        const Synthetic syn = make_synthetic(spec);
        std::map<std::string, std::string> meta{{"seed", std::to_string(spec.seed)}};
        if (!syn.noise_algorithm.empty()) {
            meta["noise"] = syn.noise_algorithm;
            meta["snr_db"] = detail::format_double(*spec.snr_db);
        }
        std::visit([&](const auto& data) { write_grid(o_.out, data, meta); }, syn.data);
        log("wrote " + o_.out);

        const AttributeMap::Metadata truth_meta{{"source", "ground-truth"}};
        auto write_truth = [&](const Grid2& g, AttributeKind kind, const std::string& tag) {
            const fs::path p = tagged(o_.out, "truth-" + tag);
            write_grid(p, AttributeMap(g, kind, 0, std::nullopt, truth_meta));
            log("wrote " + p.string());
        };
        write_truth(syn.truth.dip_p, AttributeKind::PhaseDip, "dip");
        if (syn.truth.dip_q) write_truth(*syn.truth.dip_q, AttributeKind::PhaseDip, "dipq");
        if (syn.truth.k_pos_true) write_truth(*syn.truth.k_pos_true, AttributeKind::MostPositiveCurvature, "kpos");
        if (syn.truth.k_neg_true) write_truth(*syn.truth.k_neg_true, AttributeKind::MostNegativeCurvature, "kneg");
    }

    void pyramid() {
        const SeismicSection base = as_section(read_grid(o_.input));
        const auto levels = build_section_pyramid(base, o_.scales, make_kernel(o_.sigma, o_.radius));
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const fs::path p = tagged(o_.out, "L" + std::to_string(i));
            write_grid(p, levels[i], {{"level", std::to_string(i)}});
            log("wrote " + p.string());
        }
    }

    void attr() {
        const GridFile in = read_grid(o_.input);
        const AttributeKind kind = parse_attribute_kind(o_.attr);
        const AttributeMap map = std::holds_alternative<SeismicVolume>(in.content)
                                     ? compute_attribute(as_volume(in), kind, attribute_params(o_))
                                     : compute_attribute(as_section(in), kind, attribute_params(o_));
        write_map(map);
    }

    void pipeline() {
        const GridFile in = read_grid(o_.input);
        const AttributeKind kind = parse_attribute_kind(o_.attr);
        const FusionSpec spec = fusion_spec(o_, o_.scales);
        const AttributeMap map =
            std::holds_alternative<SeismicVolume>(in.content)
                ? multiscale_attribute(as_volume(in), kind, pyramid_params(o_), spec, attribute_params(o_))
                : multiscale_attribute(as_section(in), kind, pyramid_params(o_), spec, attribute_params(o_));
        write_map(map);
    }

    void fuse() {
        std::vector<AttributeMap> maps;
        for (const auto& path : o_.inputs) maps.push_back(as_map(read_grid(path)));
        std::size_t rows = 0, cols = 0;
        for (const auto& m : maps) {
            rows = std::max(rows, m.grid().rows());
            cols = std::max(cols, m.grid().cols());
        }
        std::vector<AttributeMap> stack;
        for (std::size_t i = 0; i < maps.size(); ++i) {
            stack.push_back(expand_attribute(maps[i], rows, cols, i));
        }
        write_map(pyrafuse::fuse(AttributeStack(std::move(stack)), fusion_spec(o_, maps.size())));
    }

    void segy_import() {
        SegyImportOptions opts;
        if (o_.segy_format != 0) opts.format = segy_format_from_code(o_.segy_format);
        opts.byte_order = o_.byte_order == "little" ? ByteOrder::Little : ByteOrder::Big;
        if (o_.max_traces != 0) opts.max_traces = o_.max_traces;
        opts.dx = o_.dx;
        opts.dy = o_.dy;
        const SeismicData data = pyrafuse::segy_import(o_.input, opts);
        std::visit([&](const auto& d) { write_grid(o_.out, d); }, data);
        log("wrote " + o_.out);
    }

    void export_pgm() {
        pyrafuse::export_pgm(as_map(read_grid(o_.input)), o_.out, o_.clip_lo, o_.clip_hi);
        log("wrote " + o_.out);
    }

    void info() { out_ << describe(read_grid_header(o_.input)); }

private:
    void write_map(const AttributeMap& map) {
        write_grid(o_.out, map);
        log("wrote " + o_.out);
    }

    void log(const std::string& msg) { err_ << "pyrafuse: " << msg << "\n"; }

    const Options& o_;
    std::ostream& out_;
    std::ostream& err_;
};

void add_pyramid_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--scales", o.scales, "Number of pyramid scales K")->capture_default_str();
    cmd->add_option("--sigma", o.sigma, "Gaussian sigma")->capture_default_str();
    cmd->add_option("--radius", o.radius, "Kernel radius (support 2r+1)")->capture_default_str();
}

void add_attribute_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--attr", o.attr, "dip, dip-angle, kpos or kneg")
        ->check(CLI::IsMember({"dip", "phase-dip", "dip-angle", "kpos", "most-positive-curvature", "kneg",
                               "most-negative-curvature"}))
        ->capture_default_str();
    cmd->add_option("--velocity", o.velocity, "Velocity for time-dip conversion (m/s)")
        ->capture_default_str();
    cmd->add_option("--pmax", o.pmax, "Dip clamp (samples per trace)")->capture_default_str();
    cmd->add_option("--time-index", o.time_index, "Time slice for volume attributes (default nt/2)")
        ->each([&o](const std::string&) { o.has_time_index = true; });
}

void add_fusion_flags(CLI::App* cmd, Options& o) {
    cmd->add_option("--fuse", o.fuse, "mean, wmean, median or rank")
        ->check(CLI::IsMember({"mean", "wmean", "weighted-mean", "median", "rank"}))
        ->capture_default_str();
    cmd->add_option("--weights", o.weights, "Comma-separated per-scale weights for wmean")->delimiter(',');
    cmd->add_option("--rank", o.rank, "0-based order statistic for rank fusion")->capture_default_str();
    cmd->add_option("--weight-bias", o.weight_bias, "Default wmean weights fall off as bias^-i")
        ->capture_default_str();
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Options o;
    CLI::App app{"Multiscale seismic attribute toolkit", "pyrafuse"};
    app.require_subcommand(1);

    auto* synth = app.add_subcommand("synth", "Render a synthetic from a spec file");
    synth->add_option("spec", o.input, "SynthSpec file")->required();
    synth->add_option("--out", o.out, "Output grid (truth maps go next to it)")->required();

    auto* pyramid = app.add_subcommand("pyramid", "Write every Gaussian pyramid level of a section");
    pyramid->add_option("input", o.input)->required();
    pyramid->add_option("--out", o.out, "Output path; levels are tagged .L<i>")->required();
    add_pyramid_flags(pyramid, o);

    auto* attr = app.add_subcommand("attr", "Single-scale attribute");
    attr->add_option("input", o.input)->required();
    attr->add_option("--out", o.out)->required();
    add_attribute_flags(attr, o);

    auto* pipeline = app.add_subcommand("pipeline", "Pyramid, per-scale attribute and fusion");
    pipeline->add_option("input", o.input)->required();
    pipeline->add_option("--out", o.out)->required();
    add_pyramid_flags(pipeline, o);
    add_attribute_flags(pipeline, o);
    add_fusion_flags(pipeline, o);

    auto* fuse = app.add_subcommand("fuse", "Fuse attribute maps, finest scale first");
    fuse->add_option("inputs", o.inputs)->required();
    fuse->add_option("--out", o.out)->required();
    add_fusion_flags(fuse, o);

    auto* segy = app.add_subcommand("segy-import", "Convert SEG-Y to a grid file");
    segy->add_option("input", o.input)->required();
    segy->add_option("--out", o.out)->required();
    segy->add_option("--format", o.segy_format, "Override the sample format code (1 or 5)");
    segy->add_option("--byte-order", o.byte_order, "big or little")
        ->check(CLI::IsMember({"big", "little"}))
        ->capture_default_str();
    segy->add_option("--max-traces", o.max_traces, "Read at most this many traces");
    segy->add_option("--dx", o.dx, "Inline trace spacing (m)")->capture_default_str();
    segy->add_option("--dy", o.dy, "Crossline trace spacing (m)")->capture_default_str();

    auto* pgm = app.add_subcommand("export-pgm", "Render a 2D grid as an 8-bit PGM");
    pgm->add_option("input", o.input)->required();
    pgm->add_option("--out", o.out)->required();
    pgm->add_option("--clip-lo", o.clip_lo, "Lower clip percentile")->capture_default_str();
    pgm->add_option("--clip-hi", o.clip_hi, "Upper clip percentile")->capture_default_str();

    auto* info = app.add_subcommand("info", "Print a grid file header");
    info->add_option("input", o.input)->required();

    std::vector<std::string> argv_store{"pyrafuse"};
    argv_store.insert(argv_store.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_store) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        if (code == 0) return kExitOk;
        err << app.help();
        return kExitUsage;
    }

    Runner run(o, out, err);
    try {
        if (*synth) run.synth();
        else if (*pyramid) run.pyramid();
        else if (*attr) run.attr();
        else if (*pipeline) run.pipeline();
        else if (*fuse) run.fuse();
        else if (*segy) run.segy_import();
        else if (*pgm) run.export_pgm();
        else if (*info) run.info();
    } catch (const Error& e) {
        err << "pyrafuse: error: " << e.what() << "\n";
        return kExitData;
    }
    return kExitOk;
}

}  // namespace pyrafuse
