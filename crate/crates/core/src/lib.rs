//! Maximal weakly separated families of triangles on `n` cyclically ordered
//! points, their mutations, and the SL₃-friezes they produce when every
//! triangle is given the value 1.
//!
//! ```
//! use frieze_core::{canonical_family, extend_rows, quiddity_rows, validate_frieze, GroundSet, ValuedFamily};
//!
//! let family = canonical_family(GroundSet::new(8)?);
//! let rows = quiddity_rows(&ValuedFamily::all_ones(family)?)?;
//! let grid = extend_rows(&rows)?;
//! assert!(validate_frieze(&grid).valid());
//! # Ok::<(), frieze_core::Error>(())
//! ```

pub mod error;
pub mod family;
pub mod frieze;
pub mod ground;
pub mod mutation;
pub mod oracle;
pub mod registry;
pub mod separation;
pub mod structure;

pub use error::{Error, Result};
pub use family::{
    canonical_family, frozen_triangles, greedy_complete, random_maximal_family, Family, FamilyFile,
};
pub use frieze::{
    almost_continuous_at, build_plucker_frieze_map, extend_rows, parse_rendered, quiddity_rows,
    render_frieze, validate_frieze, FriezeGrid, FriezeReport, QuiddityRows,
};
pub use ground::{GroundSet, Triangle, MAX_POINTS, MIN_POINTS};
pub use mutation::{
    available_moves, exchange_value, mutate, MutationMove, TraceLine, ValuedFamily,
};
pub use oracle::{oracle_value, Oracle, TieBreak};
pub use registry::Registry;
pub use separation::{crosses, CrossingPredicate};
pub use structure::{
    border_triangles, build_star_graph, realize_star_graph, verify_structure_theorem, StarGraph,
    StructureReport,
};

/// Exact rationals over arbitrary-precision integers.
pub type Rational = num_rational::BigRational;

/// Written into every JSON file this crate produces.
pub const SCHEMA_VERSION: u32 = 1;

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Format(format!("'{s}' is not a rational number"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: num_bigint::BigInt = p.parse().map_err(|_| bad())?;
            let q: num_bigint::BigInt = q.parse().map_err(|_| bad())?;
            if q == num_bigint::BigInt::from(0) {
                return Err(Error::Format(format!("'{s}' has a zero denominator")));
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Pretty JSON with every short innermost array kept on one line.
pub fn to_json_lines<T: serde::Serialize>(value: &T) -> String {
    fn write(v: &serde_json::Value, indent: usize, out: &mut String) {
        use serde_json::Value;
        let pad = |k: usize| "  ".repeat(k);
        match v {
            Value::Array(items)
                if items.iter().any(|i| i.is_array() || i.is_object())
                    || v.to_string().len() > 80 =>
            {
                out.push_str("[\n");
                for (k, item) in items.iter().enumerate() {
                    out.push_str(&pad(indent + 1));
                    write(item, indent + 1, out);
                    out.push_str(if k + 1 < items.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push(']');
            }
            Value::Object(map) => {
                out.push_str("{\n");
                for (k, (key, item)) in map.iter().enumerate() {
                    out.push_str(&format!(
                        "{}{}: ",
                        pad(indent + 1),
                        Value::from(key.as_str())
                    ));
                    write(item, indent + 1, out);
                    out.push_str(if k + 1 < map.len() { ",\n" } else { "\n" });
                }
                out.push_str(&pad(indent));
                out.push('}');
            }
            Value::Array(items) => {
                let parts: Vec<String> = items.iter().map(|i| i.to_string()).collect();
                out.push_str(&format!("[{}]", parts.join(", ")));
            }
            other => out.push_str(&other.to_string()),
        }
    }
    let mut out = String::new();
    write(
        &serde_json::to_value(value).expect("serialisable"),
        0,
        &mut out,
    );
    out.push('\n');
    out
}
