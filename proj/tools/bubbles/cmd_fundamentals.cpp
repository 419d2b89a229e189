#include <iostream>

#include "artifacts.hpp"
#include "bubbles/fundamentals.hpp"
#include "commands.hpp"

namespace bubbles::cli {

void cmd_fundamentals(const FundamentalsArgs& args) {
  Manifest manifest("fundamentals");
  const std::pair<const char*, const fs::path*> inputs[] = {
      {"--s", &args.s},     {"--cpi", &args.cpi},           {"--cpi-star", &args.cpi_star},
      {"--ppi", &args.ppi}, {"--ppi-star", &args.ppi_star},
  };
  std::vector<Series> series;
  for (const auto& [flag, path] : inputs) {
    series.push_back(read_series(*path, flag, args.columns.date, args.columns.value));
    manifest.input(flag, *path);
  }

  TrimReport trim;
  const auto fs = build_fundamentals(series[0], series[1], series[2], series[3], series[4], &trim);
  for (const auto& n : trim.notes) manifest.note(n);

  ensure_directory(args.out);
  const std::pair<const char*, const Series*> outputs[] = {
      {"s.csv", &fs.s},
      {"f_traded.csv", &fs.f_traded},
      {"f_nontraded.csv", &fs.f_nontraded},
      {"s_minus_fT.csv", &fs.s_minus_fT},
      {"s_minus_fN.csv", &fs.s_minus_fN},
  };
  for (const auto& [name, x] : outputs) {
    write_series(args.out / name, *x);
    manifest.artifact(name);
  }
  manifest.parameters() = {{"date_column", args.columns.date},
                           {"value_column", args.columns.value},
                           {"common_start", trim.common_start.to_string()},
                           {"common_end", trim.common_end.to_string()},
                           {"observations", fs.size()}};
  manifest.write(args.out);
  std::cout << "fundamentals " << fs.start().to_string() << "-" << fs.end().to_string() << " ("
            << fs.size() << " months) written to " << args.out.string() << "\n";
}

}  // namespace bubbles::cli
