//! Laplacian integral graphs whose spectrum is `{0,..,n}` with one value
//! doubled and two values removed.

pub mod cache;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod search;
pub mod canon;
pub mod cert;
pub mod descriptor;
pub mod enumerate;
pub mod realizer;
pub mod spectra;
pub mod tables;
pub mod verify;

pub use descriptor::{recognize, DoubledMissingPair, ParityClass, ParityVerdict, SetDescriptor, SingleMissing};
pub use error::*;
pub use graph::{Graph, GraphFamily};
pub use graph6::{decode_graph6, encode_graph6};
pub use spectra::{
    complement_spectrum, integer_spectrum, join_spectrum, laplacian_char_poly, union_spectrum, CharPoly,
    NotIntegral, SpectrumMultiset,
};
pub use canon::{canonical_form, canonize, Canon, CanonicalForm};
pub use enumerate::{enumerate_connected, enumerate_connected_with, for_each_connected, Strategy, DEFAULT_BUDGET};
pub use search::{find_realizers, integral_catalog, scan_conjecture, verify_structural_props, ConjectureTag, ScanReport};
pub use cert::ConstructionExpr;
pub use realizer::{decide, Certificate, ConstructError, OracleCache, OracleEntry, Realizer, Reason, UnknownTag, Verdict};
pub use cache::{cache_load, cache_store, merge_records, CacheRecord, CacheStatus, LoadedCache, Quarantined};
