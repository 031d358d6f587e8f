#include <stdio.h>
#include <string.h>
#include "sphereclass.h"

int main(void) {
    ScClass *a = NULL;
    if (sc_class_parse(SC_KIND_RATIONAL, 0, 3, "H -E1 -E2 -E3", &a) != SC_STATUS_OK) return 1;
    int64_t sq = 0;
    if (sc_class_square(a, &sq) != SC_STATUS_OK || sq != -2) return 2;
    char *json = NULL;
    if (sc_reduce_json(a, &json) != SC_STATUS_OK) return 3;
    if (strstr(json, "ExceptionalWindow") == NULL) return 4;
    sc_string_free(json);
    sc_class_free(a);
    ScClass *bad = NULL;
    if (sc_class_parse(SC_KIND_RATIONAL, 0, 1, "E2", &bad) != SC_STATUS_PARSE) return 5;
    char *msg = sc_last_error();
    if (msg == NULL) return 6;
    sc_string_free(msg);
    printf("ok %s\n", sc_version());
    return 0;
}
