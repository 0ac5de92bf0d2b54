/* Minimal consumer of the C interface.
 *
 * Build (shared):
 *   cargo build -p nilcontact-ffi --release
 *   cc demo.c -I ../include -L ../../../target/release -lnilcontact_ffi -lm -o demo
 *   LD_LIBRARY_PATH=../../../target/release ./demo
 *
 * Build (static):
 *   cc demo.c -I ../include ../../../target/release/libnilcontact_ffi.a -lm -o demo
 */
#include <stdio.h>
#include "nilcontact.h"

int main(void) {
    NcProblem *problem = NULL;
    if (nc_problem_from_example("h3-sasakian", &problem) != NcOk) {
        char *msg = nc_last_error_message();
        fprintf(stderr, "load failed: %s\n", msg);
        nc_string_free(msg);
        return 1;
    }

    NcOptions opts = nc_options_default();
    NcReport *report = NULL;
    if (nc_run_contact(problem, &opts, &report) != NcOk) {
        char *msg = nc_last_error_message();
        fprintf(stderr, "run failed: %s\n", msg);
        nc_string_free(msg);
        nc_problem_free(problem);
        return 1;
    }

    printf("all binding checks pass: %s\n",
           nc_report_all_pass(report) == 1 ? "yes" : "no");

    char *json = nc_report_to_json(report);
    printf("%s\n", json);
    nc_string_free(json);

    nc_report_free(report);
    nc_problem_free(problem);
    return 0;
}
