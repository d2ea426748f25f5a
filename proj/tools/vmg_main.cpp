#include "vmg/cli_config.hpp"
#include "vmg/lattice.hpp"
#include "vmg/pricing.hpp"
#include "vmg/sampling.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace vmg;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string diag_string(const std::map<std::string, double>& diag) {
    std::ostringstream os;
    os.precision(17);
    bool first = true;
    for (const auto& [key, value] : diag) {
        if (!first) os << ';';
        os << key << '=' << value;
        first = false;
    }
    return os.str();
}

void print_price(std::ostream& os, const std::string& kind, const std::string& style,
                 const OptionSpec& opt, const PriceResult& res) {
    os << "kind,style,strike,maturity,method,price,std_error,diagnostics\n";
    os << kind << ',' << style << ',' << opt.strike << ',' << opt.maturity << ',' << res.method
       << ',' << res.price << ',';
    if (res.std_error) os << *res.std_error;
    os << ',' << diag_string(res.diagnostics) << '\n';
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multivariate variance matrix-gamma model: moments, Esscher calibration, "
                 "densities, and best-of/worst-of put pricing"};
    app.require_subcommand(1);

    std::string config_path, output_path;
    std::uint64_t seed = 20250810;
    int threads = 1;
    double override_rho = std::numeric_limits<double>::quiet_NaN();
    double override_r = std::numeric_limits<double>::quiet_NaN();
    app.add_option("--config", config_path, "JSON model configuration")->required();
    app.add_option("--output", output_path, "write CSV to this path instead of standard output");
    app.add_option("--seed", seed, "random seed for Monte Carlo and simulate");
    app.add_option("--threads", threads, "worker thread hint (results never depend on it)");
    app.add_option("--rho", override_rho, "override the config correlation parameter");
    app.add_option("--r", override_r, "override the config risk-free rate");

    auto* cmd_moments = app.add_subcommand("moments", "moments of the log-return vector R(t)");
    double t_moments = 1.0;
    cmd_moments->add_option("--t", t_moments, "horizon in years");

    auto* cmd_esscher =
        app.add_subcommand("esscher", "risk-neutral Esscher parameter and Q-statistics");

    auto* cmd_density = app.add_subcommand("density", "Fourier-inverted density grid of R(t)");
    double t_density = 0.25;
    int grid_n1 = 0, grid_n2 = 0;
    double extent_sds = 0.0;
    cmd_density->add_option("--t", t_density, "horizon in years");
    cmd_density->add_option("--n1", grid_n1, "grid count, axis 1 (power of two)");
    cmd_density->add_option("--n2", grid_n2, "grid count, axis 2 (power of two)");
    cmd_density->add_option("--extent-sds", extent_sds, "half-extent in standard deviations");

    auto* cmd_price = app.add_subcommand("price", "price one option under the Esscher measure");
    std::string kind = "best_of", style = "european", method = "lattice";
    double strike = 100.0, maturity = 0.25;
    std::int64_t paths = 1000000;
    int lat_n1 = 0, lat_n2 = 0;
    double step1 = 0.0, step2 = 0.0, dt = 0.0;
    cmd_price->add_option("--kind", kind, "best_of | worst_of")
        ->check(CLI::IsMember({"best_of", "worst_of"}));
    cmd_price->add_option("--style", style, "european | american")
        ->check(CLI::IsMember({"european", "american"}));
    cmd_price->add_option("--strike", strike, "exercise price")->required();
    cmd_price->add_option("--maturity", maturity, "maturity in years");
    cmd_price->add_option("--method", method, "lattice | fourier | mc")
        ->check(CLI::IsMember({"lattice", "fourier", "mc"}));
    cmd_price->add_option("--paths", paths, "Monte Carlo paths");
    cmd_price->add_option("--lattice-n1", lat_n1, "lattice node count, axis 1");
    cmd_price->add_option("--lattice-n2", lat_n2, "lattice node count, axis 2");
    cmd_price->add_option("--step1", step1, "lattice spacing, axis 1");
    cmd_price->add_option("--step2", step2, "lattice spacing, axis 2");
    cmd_price->add_option("--dt", dt, "lattice time increment");

    auto* cmd_simulate = app.add_subcommand("simulate", "raw samples of R(t)");
    double t_sim = 1.0;
    std::int64_t sim_paths = 1000;
    cmd_simulate->add_option("--t", t_sim, "horizon in years");
    cmd_simulate->add_option("--paths", sim_paths, "number of samples");

    CLI11_PARSE(app, argc, argv);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!output_path.empty()) {
        file.open(output_path);
        if (!file) {
            std::cerr << "error: validation: cannot open output path" << std::endl;
            return 4;
        }
        os = &file;
    }
    os->precision(17);

    try {
        ModelConfig config = parse_config(read_file(config_path));
        if (!std::isnan(override_rho)) {
            config.rho = override_rho;
            config.A = correlation_root_2d(override_rho);
        }
        if (!std::isnan(override_r)) config.r = override_r;
        const MarketModel market = to_market(config);
        const double rho_out = config.rho.value_or(std::numeric_limits<double>::quiet_NaN());

        if (*cmd_moments) {
            const Vec mean = mean_R(market, t_moments);
            const Mat cov = cov_R(market, t_moments);
            const double v1 = std::sqrt(cov(0, 0)), v2 = std::sqrt(cov(1, 1));
            *os << "rho,t,ER1,ER2,vol1,vol2,corr,kappa1,kappa2\n";
            *os << rho_out << ',' << t_moments << ',' << mean[0] << ',' << mean[1] << ',' << v1
                << ',' << v2 << ',' << cov(0, 1) / (v1 * v2) << ',' << market.kappa[0] << ','
                << market.kappa[1] << '\n';
        } else if (*cmd_esscher) {
            const EsscherSolution sol = solve_esscher(market);
            const MarketModel qmarket = risk_neutral_market(market);
            const Vec mean = mean_R(qmarket, 1.0);
            const Mat cov = cov_R(qmarket, 1.0);
            const double v1 = std::sqrt(cov(0, 0)), v2 = std::sqrt(cov(1, 1));
            *os << "quantity,value1,value2,value3,value4,value5,value6\n";
            *os << "h," << sol.h[0] << ',' << sol.h[1] << ",,,,\n";
            *os << "residual," << sol.residual << ',' << sol.iterations << ",,,,\n";
            *os << "mu_h," << qmarket.params.mu[0] << ',' << qmarket.params.mu[1] << ",,,,\n";
            const Mat& M = qmarket.params.M;
            *os << "M_h," << M(0, 0) << ',' << M(1, 0) << ',' << M(0, 1) << ',' << M(1, 1) << ','
                << M(0, 2) << ',' << M(1, 2) << '\n';
            *os << "EQ_R," << mean[0] << ',' << mean[1] << ",,,,\n";
            *os << "volQ," << v1 << ',' << v2 << ",,,,\n";
            *os << "corrQ," << cov(0, 1) / (v1 * v2) << ",,,,,\n";
        } else if (*cmd_density) {
            GridRequest request = config.grid;
            if (grid_n1 > 0) request.n1 = grid_n1;
            if (grid_n2 > 0) request.n2 = grid_n2;
            if (extent_sds > 0.0) request.extent_sds = extent_sds;
            const DensityGrid grid = density_R_fft(market, t_density, request);
            *os << "# t=" << grid.t << ",rho=" << rho_out << ",n1=" << grid.n1 << ",n2=" << grid.n2
                << ",origin1=" << grid.origin[0] << ",origin2=" << grid.origin[1]
                << ",spacing1=" << grid.spacing[0] << ",spacing2=" << grid.spacing[1]
                << ",raw_mass=" << grid.raw_mass << ",clipped_mass=" << grid.clipped_mass
                << ",nyquist_modulus=" << grid.nyquist_modulus
                << ",aliasing_warning=" << (grid.aliasing_warning ? 1 : 0) << '\n';
            *os << "y1,y2,density\n";
            for (int i = 0; i < grid.n1; ++i)
                for (int j = 0; j < grid.n2; ++j)
                    *os << grid.y1(i) << ',' << grid.y2(j) << ',' << grid.values(i, j) << '\n';
        } else if (*cmd_price) {
            OptionSpec opt = make_option(
                kind == "best_of" ? OptionSpec::Kind::best_of_put : OptionSpec::Kind::worst_of_put,
                style == "european" ? OptionSpec::Style::european : OptionSpec::Style::american,
                strike, maturity);
            LatticeSpec lattice = config.lattice;
            if (lat_n1 > 0) lattice.n1 = lat_n1;
            if (lat_n2 > 0) lattice.n2 = lat_n2;
            if (step1 > 0.0) lattice.step1 = step1;
            if (step2 > 0.0) lattice.step2 = step2;
            if (dt > 0.0) lattice.dt = dt;
            const MarketModel qmarket = risk_neutral_market(market);
            PriceResult res;
            if (method == "lattice") {
                res = price_lattice(qmarket, opt, lattice);
            } else if (method == "fourier") {
                if (opt.style != OptionSpec::Style::european)
                    throw ValidationError("price: fourier method requires European style");
                res = price_european_fourier(qmarket, opt);
            } else {
                if (opt.style != OptionSpec::Style::european)
                    throw ValidationError("price: mc method requires European style");
                res = price_monte_carlo(qmarket, opt, paths, seed);
            }
            print_price(*os, kind, style, opt, res);
        } else if (*cmd_simulate) {
            *os << "path,R1,R2\n";
            for (std::int64_t path = 0; path < sim_paths; ++path) {
                Rng rng = Rng::for_stream(seed, static_cast<std::uint64_t>(path));
                const Vec r = sample_r(market, t_sim, rng);
                *os << path << ',' << r[0] << ',' << r[1] << '\n';
            }
        }
        return 0;
    } catch (const DomainError& err) {
        std::cerr << "error: domain: " << err.what() << std::endl;
        return 2;
    } catch (const ConvergenceError& err) {
        std::cerr << "error: convergence: " << err.what() << std::endl;
        return 3;
    } catch (const ValidationError& err) {
        std::cerr << "error: validation: " << err.what() << std::endl;
        return 4;
    } catch (const std::exception& err) {
        std::cerr << "error: internal: " << err.what() << std::endl;
        return 1;
    }
}
