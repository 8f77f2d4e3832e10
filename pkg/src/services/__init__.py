"""
Services package initialization

Provides the computational services of AKZeta: index and word
combinatorics, 2-posets, ball-arithmetic evaluation, identity builders
and verification. Each service handles a specific concern and can be
used independently.
"""

# Index and word combinatorics
from .index_core import (
    parse_index, format_index, is_admissible, to_blocks, from_blocks,
    k_minus, e_plus, dual, hoffman_dual, reverse_blocks, admissible_indices
)
from .word_algebra import WordSum, check_word, index_to_word, word_to_index, word_dual, shuffle

# 2-posets
from .poset_algebra import (
    TwoPoset, PosetBuilder, is_admissible_poset, is_semi_admissible, transpose,
    w_map, w_map_by_extensions, xi_poset, i_one, i_one_level2, RewriteVariant
)

# Rigorous numerics
from .realball import RealBall
from .numerics import ConstTag, ConstKind, Evaluator, default_evaluator
from .constant_cache import FileConstantCache, NullConstantCache
from .oracles import PreflightReport, run_preflight, zeta_oracle

# Identities and verification
from .identities import Expr, FunFactor, FunKind, ArgTag, Reading
from .verification import IDENTITIES, IdentitySpec, VerificationReport, get_identity, verify
from .analysis import FunctionKind, derivative_check, limit_lemma_check, limit_lemma_report
from .suites import SUITES, SuiteResult, Verifier

# User configuration and settings location
from .user_config import (
    get_user_config_directory,
    get_settings_file_path, get_default_cache_path,
    load_settings, load_json_config,
    get_bundled_resource_path
)
from .settings import CliConfig, load_config
from .validation import ConfigValidator

# Service factory for dependency injection
from .factory import ServiceFactory, get_service_factory, initialize_services

# Make key classes available at package level
__all__ = [
    'parse_index',
    'format_index',
    'is_admissible',
    'to_blocks',
    'from_blocks',
    'k_minus',
    'e_plus',
    'dual',
    'hoffman_dual',
    'reverse_blocks',
    'admissible_indices',
    'WordSum',
    'check_word',
    'index_to_word',
    'word_to_index',
    'word_dual',
    'shuffle',
    'TwoPoset',
    'PosetBuilder',
    'is_admissible_poset',
    'is_semi_admissible',
    'transpose',
    'w_map',
    'w_map_by_extensions',
    'xi_poset',
    'i_one',
    'i_one_level2',
    'RewriteVariant',
    'RealBall',
    'ConstTag',
    'ConstKind',
    'Evaluator',
    'default_evaluator',
    'FileConstantCache',
    'NullConstantCache',
    'PreflightReport',
    'run_preflight',
    'zeta_oracle',
    'Expr',
    'FunFactor',
    'FunKind',
    'ArgTag',
    'Reading',
    'IDENTITIES',
    'IdentitySpec',
    'VerificationReport',
    'get_identity',
    'verify',
    'FunctionKind',
    'derivative_check',
    'limit_lemma_check',
    'limit_lemma_report',
    'SUITES',
    'SuiteResult',
    'Verifier',
    'get_user_config_directory',
    'get_settings_file_path',
    'get_default_cache_path',
    'load_settings',
    'load_json_config',
    'get_bundled_resource_path',
    'CliConfig',
    'load_config',
    'ConfigValidator',
    'ServiceFactory',
    'get_service_factory',
    'initialize_services',
]
