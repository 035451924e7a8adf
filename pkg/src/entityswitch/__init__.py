"""Entity-switched NER robustness auditing toolkit.

Generates corpus variants in which gold entity mentions are replaced by
plausible same-type entities of a chosen national origin, scores externally
produced prediction files with token-level IO micro-F1, and aggregates the
results per country.
"""
from .audit import (
    AuditReport,
    CountryRow,
    Manifest,
    ManifestEntry,
    VariantResult,
    aggregate,
    dump_disagreements,
    generate_audit,
    read_manifest,
    render_report,
)
from .conll_io import (
    ENTITY_TYPES,
    Corpus,
    Document,
    Mention,
    Sentence,
    Token,
    extract_mentions,
    iter_mentions,
    parse_corpus,
    serialize_corpus,
    to_io,
)
from .errors import (
    AlignmentError,
    AnnotationError,
    AuditError,
    EntitySwitchError,
    InventoryError,
    ParseError,
    SamplingError,
)
from .evaluation import (
    Counts,
    Disagreement,
    EvalResult,
    Metrics,
    TokenCounts,
    disagreements,
    evaluate,
    format_percent,
)
from .full_switch import (
    LocAnnotation,
    OrgAnnotation,
    list_unannotated_orgs,
    load_loc_annotations,
    load_org_annotations,
    parse_loc_annotations,
    parse_org_annotations,
    switch_all,
)
from .inventory import (
    CountryInventory,
    FirstName,
    Granularity,
    LocEntry,
    NamingRule,
    OrgEntry,
    OrgSubcategory,
    construct_full_names,
    exemplar_inventories,
    inventory_warnings,
    load_inventories,
    sample_entity,
    sample_full_name,
)
from .per_switch import (
    AliasTable,
    NameRole,
    build_alias_table,
    classify_role,
    generate_per_variants,
    replace_per,
)

__version__ = "0.1.0"
