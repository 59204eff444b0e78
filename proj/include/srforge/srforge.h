#ifndef SRFORGE_H
#define SRFORGE_H

/* C interface to the sr-forge super-resolution toolkit.
 *
 * Every function returns an srf_status; SRF_OK means success. On failure the
 * out-parameters are left untouched and srf_last_error() returns a
 * human-readable message for the calling thread. Objects returned through
 * srf_image** / srf_model** are owned by the caller and released with the
 * matching *_free function. Strings returned through char** are released
 * with srf_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum srf_status {
    SRF_OK = 0,
    SRF_INVALID_ARG = 1,
    SRF_IO = 2,
    SRF_NOT_FOUND = 3,
    SRF_UNSUPPORTED_FORMAT = 4,
    SRF_CORRUPT_FILE = 5,
    SRF_BAD_MAGIC = 6,
    SRF_VERSION_MISMATCH = 7,
    SRF_TRUNCATED = 8,
    SRF_SHAPE_MISMATCH = 9,
    SRF_DIMENSION_MISMATCH = 10,
    SRF_CHANNEL_MISMATCH = 11,
    SRF_EMPTY_INPUT = 12,
    SRF_INTERNAL = 13
} srf_status;

typedef struct srf_image srf_image; /* raster image, f32 values in [0, 1] */
typedef struct srf_model srf_model; /* trained model checkpoint */

const char* srf_status_name(srf_status status);
const char* srf_last_error(void);

/* --------------------------------------------------------------------- */
/* Images. Pixel data is row-major with interleaved channels (1 or 3).    */

srf_status srf_image_load(const char* path, srf_image** out);
srf_status srf_image_save(const srf_image* img, const char* path);
srf_status srf_image_create(uint32_t width, uint32_t height, uint32_t channels,
                            const float* data /* nullable: zero-filled */, srf_image** out);
void srf_image_free(srf_image* img);

uint32_t srf_image_width(const srf_image* img);
uint32_t srf_image_height(const srf_image* img);
uint32_t srf_image_channels(const srf_image* img);
const float* srf_image_data(const srf_image* img);

/* Interpolated resampling; method is "nearest", "bilinear", or "bicubic". */
srf_status srf_image_scale(const srf_image* img, double factor, const char* method,
                           srf_image** out);

/* MSE (in the 0..255 domain), PSNR in dB, and mean SSIM between two images
 * of identical shape. Any output pointer may be NULL to skip that metric. */
srf_status srf_metrics(const srf_image* a, const srf_image* b, double* mse, double* psnr,
                       double* ssim);

/* --------------------------------------------------------------------- */
/* Corpus preprocessing: images -> binary patch archive.                  */

typedef struct srf_preprocess_options {
    uint32_t patch_size; /* default 32 */
    uint32_t stride;     /* default 16 */
    uint32_t channels;   /* 1 = luma-plane pairs (default), 3 = RGB pairs */
    const char* degradation; /* "bilinear" (default) or "bicubic" */
    int sharpen;             /* nonzero applies the sharpening stencil (default on) */
    const char* denoise;     /* "none" (default), "bilateral", or "nlm" */
} srf_preprocess_options;

void srf_preprocess_options_init(srf_preprocess_options* opts);

/* Builds a patch archive at archive_path from the given image files.
 * Unreadable files are skipped; if warnings is non-NULL it receives a
 * newline-separated list of the skipped files (NULL when none). Fails if
 * no file could be read. */
srf_status srf_preprocess(const char* const* files, size_t file_count,
                          const srf_preprocess_options* opts, const char* archive_path,
                          char** warnings);

/* --------------------------------------------------------------------- */
/* Training.                                                              */

typedef struct srf_train_options {
    const char* preset;  /* "msrcnn" (default) or "srcnn" */
    uint32_t channels;   /* network channels, 1 (default) or 3 */
    const char* optimizer; /* "adam" (default) or "sgd" */
    double learning_rate;  /* default 0.003 */
    uint32_t epochs;       /* default 50 */
    uint32_t batch_size;   /* default 32 */
    uint64_t seed;         /* default 0 */
    const char* resume_checkpoint; /* NULL starts fresh */
} srf_train_options;

void srf_train_options_init(srf_train_options* opts);

/* Trains on a patch archive, writing per-epoch checkpoints, loss.csv, and
 * run.json into out_dir. If final_checkpoint is non-NULL it receives the
 * path of the last checkpoint written. */
srf_status srf_train(const char* archive_path, const char* out_dir,
                     const srf_train_options* opts, char** final_checkpoint);

/* --------------------------------------------------------------------- */
/* Reconstruction with a trained model.                                   */

srf_status srf_model_load(const char* path, srf_model** out);
void srf_model_free(srf_model* model);

/* Bicubic pre-upsample by factor (2, 3, or 4) followed by the network.
 * denoise is "none", "bilateral", or "nlm" (NULL means none). */
srf_status srf_upscale(const srf_image* img, const srf_model* model, uint32_t factor,
                       const char* denoise, srf_image** out);

/* Size-preserving refinement pass. */
srf_status srf_enhance(const srf_image* img, const srf_model* model, const char* denoise,
                       srf_image** out);

/* mode: "enhance-only", "enlarge-enhance", "double-enhance", "double-enlarge".
 * factor applies to enlarge-enhance (2 to 4); the double modes are fixed. */
srf_status srf_post_process(const srf_image* img, const srf_model* model, const char* mode,
                            uint32_t factor, const char* denoise, srf_image** out);

/* --------------------------------------------------------------------- */
/* Evaluation.                                                            */

typedef struct srf_eval_options {
    const uint32_t* factors; /* NULL = {2, 3, 4} */
    size_t factor_count;
    int rgb_metrics; /* nonzero scores RGB instead of the luma plane */
} srf_eval_options;

void srf_eval_options_init(srf_eval_options* opts);

/* Scores interpolators and the given models over the reference images.
 * model_names/model_paths are parallel arrays. csv_out and/or table_out
 * (either may be NULL) receive the formatted report. */
srf_status srf_evaluate(const char* const* reference_files, size_t reference_count,
                        const char* const* model_names, const char* const* model_paths,
                        size_t model_count, const srf_eval_options* opts, char** csv_out,
                        char** table_out);

void srf_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* SRFORGE_H */
