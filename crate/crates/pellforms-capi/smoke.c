#include <stdio.h>
#include <string.h>
#include "pellforms.h"

int main(void) {
    PfConic *conic = NULL;
    if (pf_conic_new("229", &conic) != PF_STATUS_OK) return 1;
    char *out = NULL;
    if (pf_point_analyze(conic, "((0+1*sqrt(-1))/5 ; (0-2*sqrt(-1))/15)", &out) != PF_STATUS_OK) return 2;
    if (strstr(out, "\"beta\":111") == NULL) { printf("unexpected: %s\n", out); return 3; }
    printf("analyze: %s\n", out);
    pf_string_free(out);
    uint64_t order = 0;
    if (pf_classgroup_order("229", false, &order) != PF_STATUS_OK || order != 3) return 4;
    printf("order: %llu\n", (unsigned long long)order);
    pf_conic_free(conic);
    return 0;
}
