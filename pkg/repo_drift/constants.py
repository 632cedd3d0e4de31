"""Constants for the repo_drift toolkit."""

DOMAIN = "repo_drift"
VERSION = "0.1.0"

# Alias map sentinel (bit-exact in every serialized form)
DELETED = "__DELETED__"

# Code-file globs used for the window manifest
DEFAULT_CODE_GLOBS = [
    "*.c", "*.cc", "*.cpp", "*.h", "*.hpp", "*.rs", "*.go", "*.py", "*.rb", "*.php",
    "*.java", "*.kt", "*.scala", "*.cs", "*.m", "*.mm", "*.swift",
    "*.js", "*.jsx", "*.ts", "*.tsx", "*.vue",
    "*.sh", "*.bash", "*.zsh", "*.sql",
    "*.html", "*.css", "*.scss", "*.sass",
]

# Git change status codes
STATUS_ADDED = "A"
STATUS_MODIFIED = "M"
STATUS_DELETED = "D"
STATUS_RENAMED = "R"
STATUS_COPIED = "C"

STATUS_NAMES = {
    STATUS_ADDED: "ADDED",
    STATUS_MODIFIED: "MODIFIED",
    STATUS_DELETED: "DELETED",
    STATUS_RENAMED: "RENAMED",
}

# Diff extraction
DIFF_CONTEXT_LINES = 5
MAX_DIFF_CHARS = 20000
TRUNCATION_MARKER = "[TRUNCATED]"

# Summaries
SUMMARY_TEMPERATURE = 0.2
SUMMARY_MIN_SENTENCES = 3
SUMMARY_MAX_SENTENCES = 5
FORMATTING_ONLY_STATEMENT = "Formatting-only change; no functional change."

BACKEND_SERVICE = "service"
BACKEND_HEURISTIC = "heuristic"
BACKEND_OFFLINE = "offline"
BACKEND_RAW_DIFF = "raw-diff"
BACKEND_BUNDLE = "bundle"
MAX_SUMMARY_SYMBOLS = 8

# Dataset
ORIGIN_NEW = "NEW"
ORIGIN_OLD = "OLD"
MODE_GIT_DIFF = "git-diff"
MODE_FULL_FILE = "full-file"
MODE_BASE = "base"
DEFAULT_SYNTH_TARGET = 3
DEFAULT_MAX_FILES_PER_Q = 3
SYNTH_TEMPERATURE = 0.2
SYNTH_ATTEMPTS = 2

# ICL
DEFAULT_ICL_K = 5
DEFAULT_ICL_BUDGET_CHARS = 12000  # roughly 3k tokens at ~4 chars/token
FORMATTING_PENALTY = 0.25

# Evaluation
SLICE_NEW = "NEW"
SLICE_OLD = "OLD"
SLICE_MIXED = "MIXED"
SLICES = [SLICE_NEW, SLICE_OLD, SLICE_MIXED]

REASON_DIRECT = "direct"
REASON_ALIAS_RENAME = "alias_rename"
REASON_ALIAS_DELETED = "alias_deleted"
REASON_RESCUED_SUFFIX = "rescued_suffix"
REASON_RESCUED_FUZZY = "rescued_fuzzy"
REASON_INVALID = "invalid"
REASON_UNKNOWN = "unknown"
REASONS = [
    REASON_DIRECT,
    REASON_ALIAS_RENAME,
    REASON_ALIAS_DELETED,
    REASON_RESCUED_SUFFIX,
    REASON_RESCUED_FUZZY,
    REASON_INVALID,
    REASON_UNKNOWN,
]

FUZZY_RESCUE_THRESHOLD = 0.80

PROBE_OLD_NAME = "old_name"
PROBE_NEW_NAME = "new_name"
PROBE_DELETED_OLD = "deleted_old"
PROBE_UNKNOWN = "unknown"
PROBE_CLASSES = [PROBE_OLD_NAME, PROBE_NEW_NAME, PROBE_DELETED_OLD, PROBE_UNKNOWN]

# Model harness
ADAPTER_REPLAY = "replay"
ADAPTER_SERVICE = "service"
ADAPTER_LEXICAL = "lexical"
LEXICAL_TOP_K = 3
LEXICAL_MIN_SCORE = 0.15

# Service access
ENV_LLM_ENDPOINT = "DRIFT_LLM_ENDPOINT"
ENV_LLM_MODEL = "DRIFT_LLM_MODEL"
ENV_LLM_API_KEY = "DRIFT_LLM_API_KEY"
ENV_LLM_TIMEOUT = "DRIFT_LLM_TIMEOUT"
ENV_LLM_RETRIES = "DRIFT_LLM_RETRIES"
DEFAULT_SERVICE_TIMEOUT = 60
DEFAULT_SERVICE_RETRIES = 2
DEFAULT_WORKERS = 4

# Words ignored by the lexical scorers
STOPWORDS = frozenset({
    "a", "an", "and", "are", "as", "at", "be", "by", "does", "do", "for", "from",
    "how", "in", "is", "it", "of", "on", "or", "that", "the", "this", "to",
    "what", "when", "where", "which", "who", "why", "with",
})
