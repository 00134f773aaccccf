#ifndef ELLQ_ELLQ_H
#define ELLQ_ELLQ_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define ELLQ_API __declspec(dllexport)
#else
#define ELLQ_API __attribute__((visibility("default")))
#endif

typedef int ellq_status;

#define ELLQ_OK 0
#define ELLQ_E_USAGE 1
#define ELLQ_E_DOMAIN 2
/* The output is complete but the result did not pass or could not be decided. */
#define ELLQ_E_INCONCLUSIVE 3
#define ELLQ_E_INTERNAL 4

/* Each command has a natural default format; the others are opt-in. */
#define ELLQ_FORMAT_DEFAULT 0
#define ELLQ_FORMAT_JSON 1
#define ELLQ_FORMAT_CSV 2
#define ELLQ_FORMAT_TEXT 3

typedef struct ellq_registry ellq_registry;
typedef struct ellq_curve ellq_curve;

ELLQ_API const char *ellq_version(void);
/* Message for the last failing call on this thread; never NULL. */
ELLQ_API const char *ellq_last_error(void);
/* Every char ** output is allocated by the library and released here. */
ELLQ_API void ellq_string_free(char *s);

ELLQ_API ellq_status ellq_registry_builtin(ellq_registry **out);
ELLQ_API ellq_status ellq_registry_load(const char *path, ellq_registry **out);
ELLQ_API void ellq_registry_free(ellq_registry *registry);
ELLQ_API ellq_status ellq_registry_list(const ellq_registry *registry, int format, char **out);

/* "A,B", "a1,a2,a3,a4,a6" or "@name"; registry may be NULL for the built-in one. */
ELLQ_API ellq_status ellq_curve_parse(const char *spec, const ellq_registry *registry, ellq_curve **out);
ELLQ_API void ellq_curve_free(ellq_curve *curve);
ELLQ_API ellq_status ellq_curve_describe(const ellq_curve *curve, char **out);

ELLQ_API ellq_status ellq_torsion(const ellq_curve *curve, char **out);
ELLQ_API ellq_status ellq_ap(const ellq_curve *curve, uint64_t pmax, int format, char **out);
ELLQ_API ellq_status ellq_lseries(const ellq_curve *curve, double s_re, double s_im, size_t terms, char **out);

typedef struct ellq_lvalue_options
{
    long long conductor;     /* 0: registry lookup */
    int heuristic_conductor; /* fall back to the bad-prime heuristic */
    int epsilon;             /* +1, -1 or 0 for detection */
    size_t cutoff;           /* 0: default for the conductor */
    int leading;             /* add the leading-coefficient ingredients */
} ellq_lvalue_options;

ELLQ_API void ellq_lvalue_options_init(ellq_lvalue_options *opts);
ELLQ_API ellq_status ellq_lvalue(const ellq_curve *curve, const ellq_registry *registry,
                                 const ellq_lvalue_options *opts, char **out);

/* summary may be NULL; it always receives the JSON summary. */
ELLQ_API ellq_status ellq_bsd_test(const ellq_curve *curve, uint64_t xmax, unsigned jobs, int format, char **out,
                                   char **summary);

ELLQ_API ellq_status ellq_height(const ellq_curve *curve, const char *point, char **out);

typedef struct ellq_heegner_options
{
    long long conductor; /* 0: registry lookup */
    long long disc;
    long long res;  /* negative: smallest residue */
    long long disc2; /* gz-test only */
    long long res2;
    int epsilon;    /* gz-test only; 0: registry or detection */
    size_t terms;   /* 0: automatic */
} ellq_heegner_options;

ELLQ_API void ellq_heegner_options_init(ellq_heegner_options *opts);
ELLQ_API ellq_status ellq_heegner(const ellq_curve *curve, const ellq_registry *registry,
                                  const ellq_heegner_options *opts, char **out);
ELLQ_API ellq_status ellq_gz_test(const ellq_curve *curve, const ellq_registry *registry,
                                  const ellq_heegner_options *opts, char **out);

/* stat: "torsion", "ap:<p>" or "slope" (BSD slope at xmax). */
ELLQ_API ellq_status ellq_family_scan(uint64_t X, const char *stat, uint64_t xmax, unsigned jobs, int format,
                                      char **out, char **summary);

typedef struct ellq_orbit_options
{
    size_t n;
    uint64_t seed;
    int branch; /* omega-inv: 0, +1 or -1 */
    int sign;   /* sample-cone: 0 for both cones */
    int k;      /* image-set: CM point index */
} ellq_orbit_options;

ELLQ_API void ellq_orbit_options_init(ellq_orbit_options *opts);
/*
 * op is classify (x y z, exact for decimal or p/q input), exp (x y z),
 * omega (x y z), omega-inv (re im), sample-cone or image-set.
 */
ELLQ_API ellq_status ellq_orbit(const char *op, const char *const *args, size_t nargs, const ellq_orbit_options *opts,
                                int format, char **out);

ELLQ_API ellq_status ellq_cm_verify(size_t terms, int format, char **out);
ELLQ_API ellq_status ellq_jj(double tau_re, double tau_im, size_t terms, char **out);

typedef struct ellq_conjecture_options
{
    uint64_t seed;
    uint64_t xmax;
    unsigned jobs;
    int twists;
    long max_den;
    double residual;
} ellq_conjecture_options;

ELLQ_API void ellq_conjecture_options_init(ellq_conjecture_options *opts);
/* set: orbit, X, Y or Z. */
ELLQ_API ellq_status ellq_conjecture(int k, const char *set, size_t budget, const ellq_registry *registry,
                                     const ellq_conjecture_options *opts, int format, char **out);

#ifdef __cplusplus
}
#endif

#endif
