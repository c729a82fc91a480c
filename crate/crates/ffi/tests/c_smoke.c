#include <stdio.h>
#include <string.h>

#include "floquet.h"

int main(void) {
    FloquetGraph *g = NULL;
    FloquetPotential *q1 = NULL, *q2 = NULL;
    char *json = NULL;
    int64_t zero_num[2] = {0, 0}, other_num[2] = {-2, 2}, den[2] = {1, 1};

    if (floquet_graph_builtin("pendant", &g) != FLOQUET_STATUS_OK) return 10;
    if (floquet_graph_vertex_count(g) != 2) return 11;
    floquet_potential_from_fractions(zero_num, den, 2, &q1);
    floquet_potential_from_fractions(other_num, den, 2, &q2);
    if (floquet_isospectral(g, q1, q2, FLOQUET_MODE_PERIODIC, 0, NULL) != FLOQUET_STATUS_OK) return 12;
    if (floquet_isospectral(g, q1, q2, FLOQUET_MODE_FLOQUET, 0, &json) != FLOQUET_STATUS_FALSE) return 13;
    if (strstr(json, "\"n\":2") == NULL) return 14;
    floquet_string_free(json);
    if (floquet_graph_builtin("torus", &g) != FLOQUET_STATUS_INVALID_ARGUMENT) return 15;
    if (floquet_last_error() == NULL) return 16;
    floquet_potential_free(q1);
    floquet_potential_free(q2);
    floquet_graph_free(g);
    puts("ok");
    return 0;
}
