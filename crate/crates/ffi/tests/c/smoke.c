#include <math.h>
#include <stdio.h>
#include <string.h>

#include "mbqc_xy.h"

#define CHECK(call)                                                          \
    do {                                                                     \
        MbqcStatus s_ = (call);                                              \
        if (s_ != MBQC_STATUS_OK) {                                          \
            fprintf(stderr, "%s -> %d: %s\n", #call, (int)s_,                \
                    mbqc_last_error_message());                              \
            return 1;                                                        \
        }                                                                    \
    } while (0)

int main(void) {
    MbqcCircuit *c = NULL;
    CHECK(mbqc_circuit_new(2, &c));
    CHECK(mbqc_circuit_push_h(c, 1));
    CHECK(mbqc_circuit_push_cnot(c, 1, 2));

    MbqcPattern *p = NULL;
    CHECK(mbqc_compile(c, &p));

    double zero[8] = {1, 0, 0, 0, 0, 0, 0, 0};
    MbqcState *in = NULL;
    CHECK(mbqc_state_from_amplitudes(zero, 2, &in));
    MbqcState *out = NULL;
    CHECK(mbqc_run_positive(p, in, &out));

    double amps[8];
    CHECK(mbqc_state_amplitudes(out, amps, 8));
    double p00 = amps[0] * amps[0] + amps[1] * amps[1];
    double p11 = amps[6] * amps[6] + amps[7] * amps[7];
    if (fabs(p00 - 0.5) > 1e-9 || fabs(p11 - 0.5) > 1e-9) {
        fprintf(stderr, "not a Bell state: %g %g\n", p00, p11);
        return 1;
    }

    if (mbqc_circuit_push_cz(c, 2) != MBQC_STATUS_INVALID_ARGUMENT) return 1;
    if (mbqc_last_error_message() == NULL) return 1;
    if (mbqc_state_amplitudes(out, amps, 3) != MBQC_STATUS_BUFFER_TOO_SMALL) return 1;

    char *json = NULL;
    CHECK(mbqc_pattern_to_json(p, &json));
    if (strstr(json, "mbqc-xy/pattern") == NULL) return 1;
    mbqc_string_free(json);

    mbqc_state_free(out);
    mbqc_state_free(in);
    mbqc_pattern_free(p);
    mbqc_circuit_free(c);
    printf("ok\n");
    return 0;
}
