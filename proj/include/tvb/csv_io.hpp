#pragma once

#include <map>
#include <string>
#include <vector>

#include "tvb/evaluation.hpp"
#include "tvb/hmc.hpp"
#include "tvb/series.hpp"

namespace tvb {

/// Read a count series from CSV with header `t,x` or `date,count`. The first
/// column is kept as row labels; counts must be nonnegative integers. Parse
/// errors cite the offending file row (header is row 1).
CountSeries read_count_csv(const std::string& path);

/// Write with header `date,count` when the series carries labels, `t,x` with
/// 0-based indices otherwise.
void write_count_csv(const std::string& path, const CountSeries& series);

/// Header `x,lower,mean,upper`, one row per grid point.
void write_band_csv(const std::string& path, const CredibleBand& band);

/// One row per draw: `iteration,postburn,<coordinate names...>`. Columns
/// listed in exp_columns are stored as exp(value) so log-scale sampler
/// coordinates appear in natural units. Values round-trip bit-exactly.
void write_chain_csv(const std::string& path, const Chain& chain,
                     const std::vector<int>& exp_columns);

struct StoredChain {
  std::vector<std::string> names;
  Eigen::MatrixXd draws;  // natural-scale values as stored in the file
  int burn_in = 0;
};

StoredChain read_chain_csv(const std::string& path);

/// Invert the exp() applied by write_chain_csv on the given columns.
void to_sampler_scale(StoredChain& chain, const std::vector<int>& exp_columns);

/// Flat `key=value` text, one pair per line; `#` starts a comment. Used both
/// for config files and for run manifests, so a manifest can be replayed as a
/// config.
using KeyValues = std::map<std::string, std::string>;

KeyValues read_key_values(const std::string& path);
void write_key_values(const std::string& path, const KeyValues& kv);

/// Single line `amse=<value>`.
void write_amse_report(const std::string& path, double amse_value);

}  // namespace tvb
