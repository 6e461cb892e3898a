/* C interface for the tower library (twr-ffi).
 *
 * Ownership rules: every char* returned through an out-parameter is
 * allocated by the library and must be released with twr_string_free;
 * every TwrTower* from twr_parse must be released with twr_tower_free.
 * All functions are safe to call with NULL out-parameters, which simply
 * suppresses that output. Maintained by hand, matching crates/ffi/src/lib.rs.
 */

#ifndef TWR_H
#define TWR_H

#ifdef __cplusplus
extern "C" {
#endif

/* Opaque handle for a parsed and validated tower file. */
typedef struct TwrTower TwrTower;

/* Status codes. */
enum {
  TWR_OK = 0,
  TWR_PARSE_ERROR = 1,
  TWR_INVALID_ARGUMENT = 2,
  /* the operation does not apply to this tower (wrong degree, not
     orientable, dilated cover, disconnected graph, ...) */
  TWR_NOT_APPLICABLE = 3,
  /* the computation ran but the verified property fails */
  TWR_CHECK_FAILED = 4,
  TWR_INTERNAL = 5
};

/* Library version; static string, do not free. */
const char *twr_version(void);

/* Parses a tower file from NUL-terminated UTF-8 text. Returns NULL on
 * failure; *error_out (if error_out is non-NULL) then holds the
 * diagnostics, one per line. */
TwrTower *twr_parse(const char *text, char **error_out);

void twr_tower_free(TwrTower *t);
void twr_string_free(char *s);

/* *out = 1 when the orientation double cover is trivial, else 0. */
int twr_orientable(const TwrTower *t, int *out, char **error_out);

/* Renders a Prym Gram matrix into *gram_out. which: 0 = input tower,
 * 1 / 2 = the two outputs of the tetragonal construction. */
int twr_gram(const TwrTower *t, int which, char **gram_out, char **error_out);

/* Verifies the triality; *passed = 1 on success. */
int twr_triality(const TwrTower *t, int *passed, char **error_out);

/* Factors the correspondences through multiplication by 2 on both
 * outputs; *report_out holds the psi matrices. Returns TWR_CHECK_FAILED
 * with the diagnosis in *error_out when a factorization does not exist
 * (the non-tree counterexample). */
int twr_psi(const TwrTower *t, char **report_out, char **error_out);

/* Runs the tetragonal construction and splits it; the two output towers
 * are returned serialized in the tower file format. */
int twr_construct_split(const TwrTower *t, char **out1, char **out2,
                        char **error_out);

#ifdef __cplusplus
}
#endif

#endif /* TWR_H */
