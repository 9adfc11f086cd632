/* Exercises the C header end to end: exp(z), its [1/1] approximant, and the
 * failure path for 1/(1-z) at [1/2]. Prints "ok" and exits 0 on success. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>

#include "pade_universal.h"

#define CHECK(cond)                                                    \
    do {                                                               \
        if (!(cond)) {                                                 \
            const char *msg = pu_last_error_message();                 \
            fprintf(stderr, "%s:%d: %s (%s)\n", __FILE__, __LINE__,    \
                    #cond, msg ? msg : "no error message");            \
            return 1;                                                  \
        }                                                              \
    } while (0)

int main(void) {
    PuComplex coeffs[8];
    double fact = 1.0;
    for (int k = 0; k < 8; k++) {
        if (k > 0) fact *= k;
        coeffs[k].re = 1.0 / fact;
        coeffs[k].im = 0.0;
    }
    PuComplex origin = {0.0, 0.0};
    PuSeries *exp_series = NULL;
    CHECK(pu_series_new(origin, coeffs, 8, &exp_series) == PU_STATUS_OK);

    PuRational *r = NULL;
    CHECK(pu_pade(exp_series, 1, 1, NULL, &r) == PU_STATUS_OK);

    size_t len = 0;
    CHECK(pu_rational_numerator(r, NULL, 0, &len) == PU_STATUS_BUFFER_TOO_SMALL);
    CHECK(len == 2);
    PuComplex a[2];
    CHECK(pu_rational_numerator(r, a, 2, &len) == PU_STATUS_OK);
    CHECK(fabs(a[1].re - 0.5) < 1e-15);

    /* (1 + z/2) / (1 - z/2) at z = 1 is 3. */
    PuComplex one = {1.0, 0.0}, value;
    CHECK(pu_rational_eval(r, one, NULL, &value) == PU_STATUS_OK);
    CHECK(fabs(value.re - 3.0) < 1e-14 && fabs(value.im) < 1e-14);

    double residual = 1.0;
    CHECK(pu_order_residual(exp_series, r, NULL, &residual) == PU_STATUS_OK);
    CHECK(residual < 1e-15);

    PuComplex geo[6];
    for (int k = 0; k < 6; k++) {
        geo[k].re = 1.0;
        geo[k].im = 0.0;
    }
    PuSeries *geometric = NULL;
    CHECK(pu_series_new(origin, geo, 6, &geometric) == PU_STATUS_OK);
    PuRational *missing = NULL;
    CHECK(pu_pade(geometric, 1, 2, NULL, &missing) == PU_STATUS_PADE_NOT_EXIST);
    CHECK(missing == NULL && pu_last_error_message() != NULL);

    pu_rational_free(r);
    pu_series_free(exp_series);
    pu_series_free(geometric);
    printf("ok %s\n", pu_version());
    return 0;
}
