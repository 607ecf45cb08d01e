#pragma once

#include <string>
#include <vector>

namespace qgeom::cli {

struct DensityOptions {
  std::string file;
  double tol_herm;
  double tol_trace;
  double tol_psd;
  double tol_rank;
};

struct ChartOptions {
  std::string file;
  std::vector<long long> index_set;  // 1-based at the CLI
  bool roundtrip = false;
  double tol_rank;
};

struct SchmidtOptions {
  std::string file;
  std::vector<long long> dims;  // empty: use the file's dims
  bool frames = false;
};

struct ConcurrenceOptions {
  std::string file;
  std::vector<long long> dims;
  std::string signs;         // "+,-,-" or "+--"; empty with mixture_file set
  std::string mixture_file;  // list of {signs, weight}
  std::string mode = "pure";
  std::string z_strategy = "refine";
  long long z_index = 0;
  long long seed = 7;
  long long iters = 50;
  long long samples = 64;
};

struct KrausOptions {
  std::string kraus_file;
  std::string state_file;
  bool normalize = false;
  bool canonical = false;
};

struct RandomOptions {
  std::string kind = "density";
  std::vector<long long> dims;
  long long rank = 0;  // 0: full rank
  long long count = 2;
  long long seed = 0;
};

int run_density(const DensityOptions& opt);
int run_chart(const ChartOptions& opt);
int run_schmidt(const SchmidtOptions& opt);
int run_concurrence(const ConcurrenceOptions& opt);
int run_kraus(const KrausOptions& opt);
int run_random(const RandomOptions& opt);

}  // namespace qgeom::cli
