#include <stdio.h>
#include "icosa.h"

int main(void) {
    IcosaPoly *f = NULL;
    if (icosa_poly_parse("x^5 - x^4 - 780x^3 - 1795x^2 + 3106x + 344", &f) != ICOSA_STATUS_OK) {
        return 1;
    }
    IcosaCertificate *cert = NULL;
    IcosaStatus st = icosa_verify(f, 1951, 4, false, 0, &cert);
    if (st != ICOSA_STATUS_OK) {
        fprintf(stderr, "%s\n", icosa_status_message(st));
        icosa_poly_free(f);
        return 1;
    }
    IcosaDiscStatus disc;
    icosa_certificate_disc_status(cert, &disc);
    char *json = icosa_certificate_json(cert);
    printf("%d %d %u %s\n", disc, icosa_certificate_is_a5(cert), icosa_certificate_e_p(cert), json);
    icosa_string_free(json);
    icosa_certificate_free(cert);
    icosa_poly_free(f);
    return 0;
}
