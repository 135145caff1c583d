# Upper frequency accepted by the scale maps; bounds the Bark bisection bracket.
MAX_SUPPORTED_HZ = 96000.0
BISECTION_XTOL_HZ = 1e-10

# +inf ratios are reported as this many dB
DB_CAP = 300.0

DEFAULT_CG_TOL = 1e-10
DEFAULT_CG_MAX_ITER = 500
CG_ROUNDOFF = 50

DEFAULT_MAX_LCM = 8192
DEFAULT_MAX_UNIFORM_CHANNELS = 4096

FRAME_BOUND_ITERATIONS = 200
FRAME_BOUND_RTOL = 1e-9

GAMMATONE_BETA = 1.019
GAMMATONE_ORDER = 4
GAMMATONE_IR_LENGTH = 6000

SEGSNR_FRAME_MS = 32.0
SEGSNR_CLIP_DB = (-10.0, 35.0)

SPECTROGRAM_FLOOR_DB = -80.0
RESPONSE_FLOOR_DB = -200.0

# Gram block eigenvalues below this fraction of the largest one count as zero
GRAM_RCOND = 1e-12
