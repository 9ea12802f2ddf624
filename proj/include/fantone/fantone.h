/* C interface to the fantone shared library.
 *
 * Every function returning ft_status reports failures through the status
 * code; ft_last_error() then returns a message for the calling thread.
 * Objects are opaque and owned by the caller, who releases them with the
 * matching *_free function. Pointers returned by accessors stay valid until
 * the owning object is freed. */
#ifndef FANTONE_FANTONE_H
#define FANTONE_FANTONE_H

#include <stddef.h>

#if defined(_WIN32)
#define FT_API __declspec(dllexport)
#else
#define FT_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  FT_OK = 0,
  FT_ERR_CONFIG = 1,
  FT_ERR_INVALID_ARGUMENT = 2,
  FT_ERR_IO = 3,
  FT_ERR_PARSE = 4,
  FT_ERR_NUMERIC = 5,
  FT_ERR_INTERNAL = 6
} ft_status;

typedef struct ft_config ft_config;
typedef struct ft_mesh ft_mesh;
typedef struct ft_field ft_field;
typedef struct ft_signal ft_signal;
typedef struct ft_spectrum ft_spectrum;
typedef struct ft_tones ft_tones;
typedef struct ft_band_map ft_band_map;

FT_API const char* ft_version(void);
FT_API const char* ft_last_error(void);
/* Worker threads used by the solver and surface maps; 0 restores the
 * hardware default. Results do not depend on this value. */
FT_API void ft_set_threads(unsigned threads);
/* Non-zero silences warnings (otherwise written to stderr). */
FT_API void ft_set_quiet(int quiet);
FT_API void ft_string_free(char* text);

/* -- configuration ------------------------------------------------------- */
FT_API ft_status ft_config_load(const char* path, ft_config** out);
FT_API ft_status ft_config_parse(const char* json, ft_config** out);
/* Canonical JSON; release with ft_string_free. */
FT_API ft_status ft_config_to_json(const ft_config* config, char** out);
FT_API size_t ft_config_observer_count(const ft_config* config);
FT_API const char* ft_config_observer_name(const ft_config* config, size_t index);
FT_API void ft_config_free(ft_config* config);

/* -- geometry ------------------------------------------------------------ */
FT_API ft_status ft_mesh_build(const ft_config* config, ft_mesh** out);
FT_API ft_status ft_mesh_read_csv(const char* path, ft_mesh** out);
FT_API ft_status ft_mesh_write_csv(const ft_mesh* mesh, const char* path);
FT_API size_t ft_mesh_panel_count(const ft_mesh* mesh);
FT_API void ft_mesh_free(ft_mesh* mesh);

/* -- surface pressure ---------------------------------------------------- */
/* Baseline or modulated field according to source.kind. */
FT_API ft_status ft_field_synth(const ft_config* config, const ft_mesh* mesh, ft_field** out);
FT_API ft_status ft_field_read_csv(const char* path, const ft_mesh* mesh, ft_field** out);
FT_API ft_status ft_field_write_csv(const ft_field* field, const ft_mesh* mesh, const char* path);
FT_API size_t ft_field_sample_count(const ft_field* field);
FT_API void ft_field_free(ft_field* field);

/* -- acoustic signals ---------------------------------------------------- */
FT_API ft_status ft_solve(const ft_config* config, const ft_mesh* mesh, const ft_field* field, size_t observer,
                          ft_signal** out);
FT_API ft_status ft_signal_write_csv(const ft_signal* signal, const char* path);
FT_API ft_status ft_signal_read_csv(const char* path, ft_signal** out);
FT_API size_t ft_signal_length(const ft_signal* signal);
FT_API const double* ft_signal_data(const ft_signal* signal);
FT_API double ft_signal_sample_rate(const ft_signal* signal);
FT_API double ft_signal_min_doppler(const ft_signal* signal);
FT_API void ft_signal_free(ft_signal* signal);

/* -- spectra and tones --------------------------------------------------- */
FT_API ft_status ft_spectrum_compute(const ft_config* config, const ft_signal* signal, ft_spectrum** out);
FT_API ft_status ft_spectrum_write_csv(const ft_spectrum* spectrum, const char* path);
FT_API ft_status ft_spectrum_read_csv(const char* path, ft_spectrum** out);
FT_API size_t ft_spectrum_size(const ft_spectrum* spectrum);
FT_API const double* ft_spectrum_frequency(const ft_spectrum* spectrum);
FT_API const double* ft_spectrum_psd(const ft_spectrum* spectrum);
FT_API const double* ft_spectrum_spl(const ft_spectrum* spectrum);
FT_API void ft_spectrum_free(ft_spectrum* spectrum);

FT_API ft_status ft_tones_detect(const ft_config* config, const ft_spectrum* spectrum, ft_tones** out);
/* JSON when the path ends in ".json", CSV otherwise. */
FT_API ft_status ft_tones_write(const ft_tones* tones, const char* path);
FT_API size_t ft_tones_count(const ft_tones* tones);
FT_API ft_status ft_tones_get(const ft_tones* tones, size_t index, double* frequency, double* spl, long* grid_index,
                              const char** label);
FT_API void ft_tones_free(ft_tones* tones);

FT_API ft_status ft_band_map_compute(const ft_config* config, const ft_mesh* mesh, const ft_field* field,
                                     double center_hz, double width_hz, ft_band_map** out);
FT_API ft_status ft_band_map_write_csv(const ft_band_map* map, const char* path);
FT_API size_t ft_band_map_size(const ft_band_map* map);
FT_API const double* ft_band_map_spl(const ft_band_map* map);
FT_API void ft_band_map_free(ft_band_map* map);

/* -- validation ---------------------------------------------------------- */
/* which: "dipole", "rotating", "parseval" or "decay". tolerance <= 0 selects
 * the default. detail may be NULL; otherwise release with ft_string_free. */
FT_API ft_status ft_validate(const char* which, double tolerance, int* passed, double* metric, double* used_tolerance,
                             char** detail);

#ifdef __cplusplus
}
#endif

#endif
