#include <math.h>
#include <stdio.h>
#include <string.h>

#include "cohom.h"

#define CHECK(cond) do { if (!(cond)) { fprintf(stderr, "line %d: %s\n", __LINE__, #cond); return 1; } } while (0)

int main(void) {
    CohomModel *model = NULL;
    CHECK(cohom_model_new("H:3", &model) == COHOM_STATUS_OK);
    CHECK(cohom_model_dim_v(model) == 8);

    CohomSubspace *sub = NULL;
    CHECK(cohom_subspace_from_family(model, "e", 1, 0.5, &sub) == COHOM_STATUS_OK);
    double phi[3], defect;
    CHECK(cohom_qk_angle(sub, 64, 42, phi, &defect) == COHOM_STATUS_OK);
    CHECK(fabs(phi[0] - 0.5) < 1e-8 && fabs(phi[2] - 1.5707963267948966) < 1e-8);

    CohomRecord *rec = NULL;
    CHECK(cohom_classify(sub, 1e-8, 64, 42, &rec) == COHOM_STATUS_OK);
    CohomVerdict verdict;
    CHECK(cohom_record_verdict(rec, &verdict) == COHOM_STATUS_OK);
    CHECK(verdict == COHOM_VERDICT_NON_TOTALLY_GEODESIC);
    char *json = NULL;
    CHECK(cohom_record_to_json(rec, &json) == COHOM_STATUS_OK);
    CHECK(strstr(json, "\"family\":\"e\"") != NULL);
    cohom_string_free(json);

    CohomSubspace *bad = NULL;
    CHECK(cohom_subspace_from_family(model, "d", 2, NAN, &bad) == COHOM_STATUS_INADMISSIBLE);
    CHECK(bad == NULL && cohom_last_error() != NULL);

    cohom_record_free(rec);
    cohom_subspace_free(sub);
    cohom_model_free(model);
    printf("ok %s\n", cohom_version());
    return 0;
}
