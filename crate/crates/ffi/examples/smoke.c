/* Minimal C consumer: reduce a tuple and print the result. */
#include <stdio.h>

#include "workbench.h"

int main(void) {
    char *reduced = NULL;
    char *fundamental = NULL;
    if (wb_reduce_tuple("(L0,L0,L1)", &reduced, &fundamental) != WB_STATUS_OK) {
        fprintf(stderr, "error: %s\n", wb_last_error());
        return 1;
    }
    printf("%s %s\n", reduced, fundamental);
    wb_string_free(reduced);
    wb_string_free(fundamental);
    return 0;
}
