//! Germ files: JSON with `name`, `simples`, `delta`, optional `atoms`, and
//! `product` triples `[a, b, ab]`. Saved files are canonical: simples and
//! atoms in byte order of their names, triples sorted by `(a, b)`, one
//! triple per line.

use std::io::{Read, Write};

use thiserror::Error;

use crate::germ::{validate, Germ, RawGerm, Violation};

#[derive(Debug, Error)]
pub enum GermFileError {
    #[error("cannot read germ file: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed germ file: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("germ fails validation ({} violation(s))", .0.len())]
    Invalid(Vec<Violation>),
}

/// The file form of a germ, without identity products.
pub fn to_raw(germ: &Germ) -> RawGerm {
    let mut simples = germ.names().to_vec();
    simples.sort();
    let mut atoms: Vec<String> = germ.atoms().iter().map(|&a| germ.name_of(a).to_string()).collect();
    atoms.sort();
    let mut product: Vec<[String; 3]> = germ
        .product_entries()
        .map(|(a, b, c)| [a, b, c].map(|s| germ.name_of(s).to_string()))
        .collect();
    product.sort();
    RawGerm {
        name: germ.name().to_string(),
        simples,
        delta: germ.name_of(germ.delta()).to_string(),
        atoms: Some(atoms),
        product,
    }
}

fn quoted(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn list(items: &[String]) -> String {
    let parts: Vec<String> = items.iter().map(|s| quoted(s)).collect();
    format!("[{}]", parts.join(", "))
}

pub fn save_germ(germ: &Germ, mut sink: impl Write) -> std::io::Result<()> {
    let raw = to_raw(germ);
    writeln!(sink, "{{")?;
    writeln!(sink, "  \"name\": {},", quoted(&raw.name))?;
    writeln!(sink, "  \"simples\": {},", list(&raw.simples))?;
    writeln!(sink, "  \"delta\": {},", quoted(&raw.delta))?;
    writeln!(sink, "  \"atoms\": {},", list(raw.atoms.as_deref().unwrap_or_default()))?;
    if raw.product.is_empty() {
        writeln!(sink, "  \"product\": []")?;
    } else {
        writeln!(sink, "  \"product\": [")?;
        let n = raw.product.len();
        for (i, t) in raw.product.iter().enumerate() {
            let comma = if i + 1 < n { "," } else { "" };
            writeln!(sink, "    {}{comma}", list(t))?;
        }
        writeln!(sink, "  ]")?;
    }
    writeln!(sink, "}}")
}

/// Parses and validates a germ file.
pub fn load_germ(mut source: impl Read) -> Result<Germ, GermFileError> {
    let mut text = String::new();
    source.read_to_string(&mut text)?;
    let raw: RawGerm = serde_json::from_str(&text)?;
    validate(&raw).map_err(GermFileError::Invalid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builders::{classical_artin, dual_artin, CoxeterSpec};

    fn round_trip(g: &Germ) -> Germ {
        let mut buf = Vec::new();
        save_germ(g, &mut buf).unwrap();
        load_germ(buf.as_slice()).unwrap()
    }

    #[test]
    fn round_trips() {
        for g in [
            classical_artin(CoxeterSpec::A(2)).unwrap(),
            dual_artin(CoxeterSpec::A(3)).unwrap(),
            dual_artin(CoxeterSpec::I2(5)).unwrap(),
        ] {
            assert_eq!(round_trip(&g), g);
        }
    }

    #[test]
    fn output_parses_as_json() {
        let mut buf = Vec::new();
        save_germ(&dual_artin(CoxeterSpec::A(2)).unwrap(), &mut buf).unwrap();
        let v: serde_json::Value = serde_json::from_slice(&buf).unwrap();
        assert_eq!(v["delta"], "(123)");
        assert_eq!(v["product"].as_array().unwrap().len(), 3);
    }

    #[test]
    fn missing_identity() {
        let text = r#"{"name": "x", "simples": ["a"], "delta": "a", "product": []}"#;
        match load_germ(text.as_bytes()) {
            Err(GermFileError::Invalid(v)) => assert!(v.contains(&Violation::MissingIdentity)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(load_germ("{".as_bytes()), Err(GermFileError::Parse(_))));
    }
}
