#include "fuzzyref/fuzzyref.h"

int fzr_header_compiles_as_c(void) {
  fzr_oracle_summary summary = {0};
  fzr_status status = FZR_OK;
  (void)summary;
  (void)status;
  return (int)fzr_scenario_count();
}
