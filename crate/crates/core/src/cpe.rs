//! CPE 2.3 formatted-string identifiers for applications (`part = a`).
//!
//! Component values are held unescaped. When formatted, every character
//! outside `[a-z0-9._-]` is preceded by a backslash, and the logical value
//! ANY renders as a bare `*`. A literal asterisk therefore renders as `\*`.
//! Colons are never valid inside a value, escaped or not.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// One CPE attribute value.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Component {
    Any,
    Value(String),
}

impl Component {
    /// `"*"` maps to [`Component::Any`]; anything else is a literal value.
    pub fn new(raw: &str) -> Result<Self> {
        if raw == "*" {
            return Ok(Component::Any);
        }
        Component::literal(raw)
    }

    /// A literal value, even if it is `"*"`.
    pub fn literal(raw: &str) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::InvalidComponent("empty component".into()));
        }
        if raw.contains(':') {
            return Err(Error::InvalidComponent(format!("{raw:?} contains ':'")));
        }
        Ok(Component::Value(raw.to_string()))
    }

    fn write_escaped(&self, out: &mut String) {
        match self {
            Component::Any => out.push('*'),
            Component::Value(v) => {
                for c in v.chars() {
                    if !is_plain(c) {
                        out.push('\\');
                    }
                    out.push(c);
                }
            }
        }
    }

    fn parse_escaped(field: &str) -> Result<Self> {
        if field == "*" {
            return Ok(Component::Any);
        }
        let mut value = String::with_capacity(field.len());
        let mut chars = field.chars();
        while let Some(c) = chars.next() {
            if c == '\\' {
                match chars.next() {
                    Some(e) if !is_plain(e) => value.push(e),
                    Some(e) => {
                        return Err(Error::InvalidComponent(format!(
                            "needless escape of {e:?} in {field:?}"
                        )))
                    }
                    None => {
                        return Err(Error::InvalidComponent(format!(
                            "dangling escape in {field:?}"
                        )))
                    }
                }
            } else if is_plain(c) {
                value.push(c);
            } else {
                return Err(Error::InvalidComponent(format!(
                    "unescaped {c:?} in {field:?}"
                )));
            }
        }
        Component::literal(&value)
    }
}

fn is_plain(c: char) -> bool {
    matches!(c, 'a'..='z' | '0'..='9' | '.' | '_' | '-')
}

/// The seven attributes after `version`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpeField {
    Update,
    Edition,
    Language,
    SwEdition,
    TargetSw,
    TargetHw,
    Other,
}

/// `cpe:2.3:a:<vendor>:<product>:<version>:<update>:<edition>:<language>:<sw_edition>:<target_sw>:<target_hw>:<other>`
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CpeIdentifier {
    pub vendor: Component,
    pub product: Component,
    pub version: Component,
    /// update, edition, language, sw_edition, target_sw, target_hw, other
    pub trailing: [Component; 7],
}

const PREFIX: &str = "cpe:2.3:a:";

impl CpeIdentifier {
    /// Application identifier with every trailing attribute set to ANY.
    pub fn new(vendor: &str, product: &str, version: &str) -> Result<Self> {
        Ok(CpeIdentifier {
            vendor: Component::new(vendor)?,
            product: Component::new(product)?,
            version: Component::new(version)?,
            trailing: std::array::from_fn(|_| Component::Any),
        })
    }

    pub fn with(mut self, field: CpeField, value: &str) -> Result<Self> {
        self.trailing[field as usize] = Component::new(value)?;
        Ok(self)
    }

    pub fn with_target_sw(self, value: &str) -> Result<Self> {
        self.with(CpeField::TargetSw, value)
    }

    pub fn get(&self, field: CpeField) -> &Component {
        &self.trailing[field as usize]
    }

    pub fn parse(s: &str) -> Result<Self> {
        let rest = s.strip_prefix(PREFIX).ok_or_else(|| {
            Error::InvalidComponent(format!("{s:?} does not start with {PREFIX:?}"))
        })?;
        let fields = split_unescaped(rest);
        if fields.len() != 10 {
            return Err(Error::InvalidComponent(format!(
                "expected 13 fields, found {}",
                fields.len() + 3
            )));
        }
        let mut comps = fields
            .into_iter()
            .map(Component::parse_escaped)
            .collect::<Result<Vec<_>>>()?
            .into_iter();
        let mut next = || comps.next().expect("length checked");
        Ok(CpeIdentifier {
            vendor: next(),
            product: next(),
            version: next(),
            trailing: std::array::from_fn(|_| next()),
        })
    }
}

/// Splits on `:` not preceded by an escaping backslash.
fn split_unescaped(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    let mut start = 0;
    let mut escaped = false;
    for (i, c) in s.char_indices() {
        match (escaped, c) {
            (true, _) => escaped = false,
            (false, '\\') => escaped = true,
            (false, ':') => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

/// Identifier for an application release, with `target_sw` left as ANY.
pub fn cpe_for(vendor: &str, product: &str, version: &str) -> Result<CpeIdentifier> {
    CpeIdentifier::new(vendor, product, version)
}

impl fmt::Display for CpeIdentifier {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::from(PREFIX);
        self.vendor.write_escaped(&mut out);
        for c in [&self.product, &self.version]
            .into_iter()
            .chain(&self.trailing)
        {
            out.push(':');
            c.write_escaped(&mut out);
        }
        f.write_str(&out)
    }
}

impl FromStr for CpeIdentifier {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        CpeIdentifier::parse(s)
    }
}

impl Serialize for CpeIdentifier {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for CpeIdentifier {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn release_identifier() {
        let c = cpe_for("bartzbeielstein", "spotforecast2-safe", "1.0.0")
            .unwrap()
            .with_target_sw("python")
            .unwrap();
        assert_eq!(
            c.to_string(),
            "cpe:2.3:a:bartzbeielstein:spotforecast2-safe:1.0.0:*:*:*:*:python:*:*"
        );
        assert_eq!(CpeIdentifier::parse(&c.to_string()).unwrap(), c);
    }

    #[test]
    fn wildcard_version() {
        let c = cpe_for(
            "sequential_parameter_optimization",
            "spotforecast2_safe",
            "*",
        )
        .unwrap();
        assert_eq!(
            c.to_string(),
            "cpe:2.3:a:sequential_parameter_optimization:spotforecast2_safe:*:*:*:*:*:*:*:*"
        );
        assert_eq!(c.version, Component::Any);
    }

    #[test]
    fn escaping() {
        let c = cpe_for("acme inc", "a*b", "2.0!").unwrap();
        assert_eq!(
            c.to_string(),
            r"cpe:2.3:a:acme\ inc:a\*b:2.0\!:*:*:*:*:*:*:*"
        );
        assert_eq!(CpeIdentifier::parse(&c.to_string()).unwrap(), c);
        let star = CpeIdentifier {
            version: Component::literal("*").unwrap(),
            ..c
        };
        assert!(star.to_string().contains(r":\*:"));
    }

    #[test]
    fn invalid_inputs() {
        assert!(matches!(
            cpe_for("", "p", "1"),
            Err(Error::InvalidComponent(_))
        ));
        assert!(matches!(
            cpe_for("v", "a:b", "1"),
            Err(Error::InvalidComponent(_))
        ));
        for bad in [
            "cpe:2.3:a:v:p:1:*:*:*:*:*:*",
            "cpe:2.3:o:v:p:1:*:*:*:*:*:*:*",
            "cpe:2.2:a:v:p:1:*:*:*:*:*:*:*",
            "cpe:2.3:a:v:p:1:*:*:*:*:*:*:*:*",
            "cpe:2.3:a:V:p:1:*:*:*:*:*:*:*",
            "cpe:2.3:a:v:p:1\\:*:*:*:*:*:*:*",
            "cpe:2.3:a:v:\\p:1:*:*:*:*:*:*:*",
            "cpe:2.3:a:v::1:*:*:*:*:*:*:*",
        ] {
            assert!(CpeIdentifier::parse(bad).is_err(), "{bad}");
        }
    }

    fn component() -> impl Strategy<Value = Component> {
        prop_oneof![
            1 => Just(Component::Any),
            6 => "[a-zA-Z0-9._~!*@ -]{1,12}"
                .prop_map(|s| Component::literal(&s).unwrap()),
        ]
    }

    fn identifier() -> impl Strategy<Value = CpeIdentifier> {
        (
            component(),
            component(),
            component(),
            proptest::array::uniform7(component()),
        )
            .prop_map(|(vendor, product, version, trailing)| CpeIdentifier {
                vendor,
                product,
                version,
                trailing,
            })
    }

    proptest! {
        #[test]
        fn format_parse_round_trip(c in identifier()) {
            let s = c.to_string();
            prop_assert!(s.starts_with("cpe:2.3:a:"));
            prop_assert_eq!(split_unescaped(&s).len(), 13);
            let back = CpeIdentifier::parse(&s).unwrap();
            prop_assert_eq!(back.to_string(), s);
            prop_assert_eq!(back, c);
        }
    }
}
