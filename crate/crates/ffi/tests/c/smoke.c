#include <math.h>
#include <stdio.h>
#include "ptmodel.h"

int main(void) {
    double h[9];
    if (ptm_hamiltonian(3, 0.5, h, 9) != PTM_STATUS_OK) return 1;
    if (h[4] != 0.0 || fabs(h[1] - sqrt(2.0) * 0.5) > 1e-15) return 2;

    PtmDysonMap *map = NULL;
    if (ptm_dyson_map_new(3, &map) != PTM_STATUS_OK) return 3;
    double omega[9];
    if (ptm_dyson_map_omega(map, 1.0, omega, 9) != PTM_STATUS_SINGULAR) return 4;
    char msg[128];
    if (ptm_last_error_message(msg, sizeof msg) == 0) return 5;
    ptm_dyson_map_free(map);

    PtmTrajectory *traj = NULL;
    if (ptm_evolve(2, 0.0, 0.5, 1e-3, PTM_FRAME_S_FULL, NULL, NULL, &traj) != PTM_STATUS_OK) return 6;
    if (ptm_trajectory_len(traj) != 501 || ptm_trajectory_norm_drift(traj) > 1e-10) return 7;
    ptm_trajectory_free(traj);

    printf("ok %s\n", ptm_version());
    return 0;
}
