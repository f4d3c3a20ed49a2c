#include <stdio.h>
#include <string.h>
#include "partsemi.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "failed: %s (%s)\n", #cond, ps_last_error_message()); return 1; } } while (0)

int main(void) {
    const char *json = "{\"n\":4,\"blocks\":[[0,1],[2,3]],\"si\":{\"kind\":\"full\"}}";
    PsInstance *inst = NULL;
    CHECK(ps_instance_from_json(json, 0, &inst) == PS_STATUS_OK);

    size_t count = 0, n = 0;
    CHECK(ps_instance_member_count(inst, &count) == PS_STATUS_OK && count == 64);
    CHECK(ps_instance_degree(inst, &n) == PS_STATUS_OK && n == 4);

    size_t f[4] = {2, 3, 0, 0};
    bool regular = false, idempotent = true;
    CHECK(ps_is_regular(inst, f, 4, PS_MODE_BOTH, &regular) == PS_STATUS_OK && regular);
    CHECK(ps_is_idempotent(inst, f, 4, PS_MODE_BOTH, &idempotent) == PS_STATUS_OK && !idempotent);

    size_t g[4] = {2, 2, 0, 0}, h[4] = {1, 1, 3, 3};
    bool d = false;
    CHECK(ps_green_related(inst, PS_RELATION_D, g, h, 4, PS_MODE_BOTH, &d) == PS_STATUS_OK && d);

    size_t outsider[4] = {0, 2, 0, 0};
    CHECK(ps_is_regular(inst, outsider, 4, PS_MODE_BOTH, &regular) == PS_STATUS_INVALID_ARGUMENT);
    CHECK(strstr(ps_last_error_message(), "not a member") != NULL);
    ps_instance_free(inst);

    char *report = NULL;
    bool passed = false;
    CHECK(ps_verify(2, 0, "closure", &report, &passed) == PS_STATUS_OK && passed);
    CHECK(strstr(report, "\"verdict\":\"pass\"") != NULL);
    ps_string_free(report);

    printf("ok\n");
    return 0;
}
