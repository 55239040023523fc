// Fuzz target func2 for func2() from foo_packed.h:28.
// Generated by ftg (ANNOTATED, abi lp64); do not edit.
//
// Input layout: 0 fixed byte(s), then int elements (4 byte(s) each) to the end of input.
//   [0, end) arr, length passed as len

#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>
#include <string.h>

#include "foo_packed.h"

_Static_assert(sizeof(int) == 4, "ftg: int is not 4 byte(s) on this target (abi lp64)");

int LLVMFuzzerTestOneInput(const uint8_t *data, size_t size) {
  const uint8_t *pos = data;
  size_t count = size / sizeof(int);
  int *arr = (int *)malloc(count * sizeof(int));
  if (arr == NULL && count > 0) {
    return 0;
  }
  if (count > 0) {
    memcpy(arr, pos, count * sizeof(int));
  }
  int len = (int)count;
  func2(arr, len);
  free(arr);
  return 0;
}
