#include <stdio.h>
#include "fracmvt.h"

int main(void) {
    FmExpr *f = NULL;
    if (fracmvt_expr_parse("x^2", &f) != FM_STATUS_OK) {
        return 1;
    }
    FmWitness w;
    FmStatus status = fracmvt_differential_mvt_witness(f, 0.5, 0.0, 1.0, 2049, &w);
    fracmvt_expr_free(f);
    if (status != FM_STATUS_OK) {
        char msg[256];
        fracmvt_last_error(msg, sizeof msg);
        fprintf(stderr, "error: %s\n", msg);
        return 1;
    }
    printf("xi = %.12f, residual = %.3e\n", w.xi, w.residual);

    FmExpr *bad = NULL;
    if (fracmvt_expr_parse("x +", &bad) != FM_STATUS_OK) {
        char msg[256];
        fracmvt_last_error(msg, sizeof msg);
        printf("rejected: %s\n", msg);
    }
    return 0;
}
