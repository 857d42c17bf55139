#include "corona/cli_io.hpp"

#include <CLI11.hpp>

int main(int argc, char** argv) {
  corona::RunConfig c;
  std::string config_path;
  double dp = 0.0;
  bool svg = false, fields = false;

  CLI::App app{"Construct g1 (invertible) and g2 with f1 g1 + f2 g2 = 1 for real symmetric Blaschke products."};
  app.add_option("--config", config_path, "JSON run configuration; other flags override it");
  app.add_option("--f1", c.f1, "zero file of f1 ('re im' per line)");
  app.add_option("--f2", c.f2, "zero file of f2");
  app.add_option("--epsilon", c.epsilon, "sublevel of |f2| on which f1 must keep one sign");
  app.add_option("--delta-prime", dp, "override min(delta, epsilon) / 10");
  app.add_option("--grid", c.resolution, "grid resolution (power of two in [128, 4096])");
  app.add_option("--out", c.out, "output directory for report.json and requested artifacts");
  app.add_flag("--svg", svg, "write geometry.svg and geometry.json");
  app.add_flag("--fields", fields, "write fields.csv");
  app.add_option("--seed", c.seed, "seed for random verification points");
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 5;
  }

  try {
    if (!config_path.empty()) {
      corona::RunConfig base = corona::parse_config(corona::read_text(config_path));
      for (const auto* o : app.get_options()) {
        if (o->count() == 0) continue;
        const std::string n = o->get_name();
        if (n == "--f1") base.f1 = c.f1;
        if (n == "--f2") base.f2 = c.f2;
        if (n == "--epsilon") base.epsilon = c.epsilon;
        if (n == "--grid") base.resolution = c.resolution;
        if (n == "--out") base.out = c.out;
        if (n == "--seed") base.seed = c.seed;
      }
      c = base;
    }
  } catch (const corona::Error& e) {
    std::cout << "stabilize: input-error (exit 5): " << e.what() << "\n";
    return 5;
  }
  if (app.count("--delta-prime")) c.delta_prime = dp;
  if (svg) c.emit_svg = true;
  if (fields) c.emit_fields = true;
  return corona::run(c);
}
