// walkerhol: analyze, verify and decompose Walker metric specs.
//
// Exit codes: 0 success, 1 input error (or a failed verify row),
// 2 when analyze cannot determine the holonomy type.

#include "wh/analysis.hpp"
#include "wh/errors.hpp"

#include "CLI11.hpp"

#include <iostream>

namespace {

struct Args {
    std::string spec;
    std::string point;
    int samples = 5;
    int curves = 64;
    int points = 10;
    std::uint64_t seed = 0;
    std::optional<double> tol;
    bool text = false;
};

wh::Point point_or_default(const Args& args, const wh::Geometry& geo)
{
    return args.point.empty() ? wh::default_point(geo.n()) : wh::parse_point(args.point, geo.n());
}

int run_analyze(const Args& args)
{
    const wh::Geometry geo(wh::load_metric_spec(args.spec));
    wh::AnalyzeOptions opts;
    opts.point = point_or_default(args, geo);
    opts.samples = args.samples;
    opts.curves = args.curves;
    opts.seed = args.seed;
    opts.tol = args.tol ? *args.tol : wh::default_tolerance(wh::kSampledTol);
    const wh::Analysis a = wh::analyze(geo, opts);
    wh::VerifyOptions vo;
    vo.points = args.samples;
    vo.seed = args.seed;
    vo.center = a.base;
    const wh::Json report = wh::report_json(geo, a, wh::verify(geo, vo));
    if (args.text)
        std::cout << wh::report_text(report);
    else
        std::cout << report.dump(2) << "\n";
    return a.holonomy.type == wh::HolonomyType::Indeterminate ? 2 : 0;
}

int run_verify(const Args& args)
{
    const wh::Geometry geo(wh::load_metric_spec(args.spec));
    wh::VerifyOptions vo;
    vo.points = args.points;
    vo.seed = args.seed;
    const auto rows = wh::verify(geo, vo);
    std::cout << wh::verify_text(rows);
    for (const auto& r : rows)
        if (!r.pass) return 1;
    return 0;
}

int run_decompose(const Args& args)
{
    const wh::Geometry geo(wh::load_metric_spec(args.spec));
    std::cout << wh::decompose_json(geo, point_or_default(args, geo)).dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Holonomy analysis of Walker metrics"};
    app.require_subcommand(1);
    Args args;

    auto* analyze = app.add_subcommand("analyze", "Decompose curvature, sample holonomy, classify and check criteria");
    analyze->add_option("spec", args.spec, "Metric spec file")->required();
    analyze->add_option("--point", args.point, "Base point c0,...,c{n+1} (default 0,1,...,1,0)");
    analyze->add_option("--samples", args.samples, "Points for per-point components")->check(CLI::PositiveNumber);
    analyze->add_option("--seed", args.seed, "Random seed");
    analyze->add_option("--tol", args.tol, "Tolerance (default WH_TOL or 1e-5)")->check(CLI::PositiveNumber);
    analyze->add_option("--curves", args.curves, "Random curves for holonomy sampling")->check(CLI::NonNegativeNumber);
    auto* json = analyze->add_flag("--json", "JSON output (default)");
    analyze->add_flag("--text", args.text, "Human-readable output")->excludes(json);

    auto* verify = app.add_subcommand("verify", "Run the invariant suite at random points");
    verify->add_option("spec", args.spec, "Metric spec file")->required();
    verify->add_option("--points", args.points, "Number of points")->check(CLI::PositiveNumber);
    verify->add_option("--seed", args.seed, "Random seed");

    auto* decompose = app.add_subcommand("decompose", "Curvature components at one point as JSON");
    decompose->add_option("spec", args.spec, "Metric spec file")->required();
    decompose->add_option("--point", args.point, "Point c0,...,c{n+1}")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (analyze->parsed()) return run_analyze(args);
        if (verify->parsed()) return run_verify(args);
        return run_decompose(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
