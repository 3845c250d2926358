#ifndef TOPOFORGE_H
#define TOPOFORGE_H

/* C interface to the topoforge core: construction and verification of
 * finite-stage neighborhood bases for field topologies with simple-root
 * lifting behavior (see README).  All functions are thread-compatible on
 * distinct sessions; a session must not be used from two threads at once.
 *
 * Strings returned through char** are heap-allocated; release them with
 * tf_string_free.  Status codes mirror the CLI exit codes.
 */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum tf_status {
  TF_OK = 0,
  TF_E_VERIFY = 1,   /* artifact failed re-verification */
  TF_E_BADARG = 2,   /* malformed input, config, or artifact */
  TF_E_BUDGET = 3,   /* search budget exhausted; partial artifact available */
  TF_E_INTERNAL = 5
} tf_status;

typedef struct tf_session tf_session;

/* config_json: a RunConfig document; NULL or "{}" selects defaults. */
tf_session* tf_session_create(const char* config_json);
void tf_session_destroy(tf_session* s);

/* Last error message for this session; owned by the session. */
const char* tf_session_last_error(const tf_session* s);

/* Diagonal stage-matrix build.  On TF_OK and TF_E_BUDGET an artifact JSON
 * document is written to *artifact_json_out (partial in the budget case). */
tf_status tf_build(tf_session* s, char** artifact_json_out);

/* Frontier build: samples_json = {"dim": n, "limit_point": [enc,...],
 * "samples": [[enc,...], ...]} with elements in the session field's text
 * encoding ("p:<p>;d:<d>;c:[...]"). */
tf_status tf_frontier_build(tf_session* s, const char* samples_json, char** artifact_json_out);

/* Independent re-verification of an artifact document. */
tf_status tf_verify(tf_session* s, const char* artifact_json, char** report_json_out);

/* Exhaustive suitable-sequence search over F_p (p in {2,3,5}). */
tf_status tf_brute_force(tf_session* s, unsigned p, unsigned max_len, char** report_json_out);

/* Schedule probe: the pair (a_i encoding, n_i) as a small JSON object. */
tf_status tf_schedule_at(tf_session* s, unsigned long long i, char** pair_json_out);

/* Re-format a JSON document (pretty != 0 for indented). */
tf_status tf_reformat(tf_session* s, const char* json, int pretty, char** out);

void tf_string_free(char* s);

/* Library version, monotonically increasing. */
unsigned tf_version(void);

#ifdef __cplusplus
}
#endif

#endif /* TOPOFORGE_H */
