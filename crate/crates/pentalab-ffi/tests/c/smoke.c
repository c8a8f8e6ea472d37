#include <stdio.h>
#include <string.h>
#include "pentalab.h"

int main(void) {
    const char *x[] = {"2", "3", "2", "3", "2", "3"};
    PlCoords *v = NULL, *w = NULL;
    if (pl_coords_new(x, 6, &v) != PL_STATUS_OK) return 1;
    if (pl_coords_alpha(v, 1, &w) != PL_STATUS_OK) return 2;
    char *s = NULL;
    if (pl_coords_get(w, 1, &s) != PL_STATUS_OK) return 3;
    int ok = strcmp(s, "3") == 0;
    pl_string_free(s);
    char *d = NULL;
    if (pl_dodgson_det("{\"matrix\": [[1,2,3],[4,5,6],[7,8,10]]}", 0, &d) != PL_STATUS_OK) return 4;
    ok = ok && strcmp(d, "-3") == 0;
    pl_string_free(d);
    double re = 0, im = 0;
    if (pl_lambda(8, 1, &re, &im) != PL_STATUS_UNSUPPORTED) return 5;
    ok = ok && strlen(pl_last_error()) > 0;
    pl_coords_free(w);
    pl_coords_free(v);
    printf("%s\n", ok ? "ok" : "mismatch");
    return ok ? 0 : 6;
}
