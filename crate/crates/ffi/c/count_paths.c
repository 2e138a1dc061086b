/* Counts 3-vertex paths in a random subset of F_3^7.
 *
 *   cc -I crates/ffi/include crates/ffi/c/count_paths.c \
 *      target/release/libffdg_ffi.a -lpthread -ldl -lm -o count_paths
 */
#include <stdio.h>

#include "ffdg.h"

static int check(FfdgStatus s) {
  if (s != FFDG_OK) {
    fprintf(stderr, "ffdg error %d: %s\n", (int)s, ffdg_last_error());
    return 1;
  }
  return 0;
}

int main(void) {
  FfdgField *field = NULL;
  FfdgPointSet *set = NULL;
  FfdgGraph *graph = NULL;
  FfdgCount count;
  int rc = 1;

  if (check(ffdg_field_new(3, 1, &field))) goto done;
  if (check(ffdg_set_random(field, 7, 0.95, 1, &set))) goto done;
  if (check(ffdg_graph_generate(FFDG_GRAPH_PATH, 3, 1, &graph))) goto done;
  if (check(ffdg_count(set, graph, false, 0, &count))) goto done;

  printf("|A| = %zu, alpha = %.6f\n", ffdg_set_len(set), ffdg_set_density(set));
  printf("C = %llu, C* = %llu, N = %.6f, N* = %.6f\n", (unsigned long long)count.c,
         (unsigned long long)count.c_star, count.n, count.n_star);
  rc = 0;

done:
  ffdg_graph_free(graph);
  ffdg_set_free(set);
  ffdg_field_free(field);
  return rc;
}
