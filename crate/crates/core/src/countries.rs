//! Embedded country table: canonical name, ISO 3166 alpha-2 code, centroid and aliases.

use std::collections::HashMap;
use std::sync::OnceLock;

use crate::corpus::{collapse_whitespace, fold_diacritics};
use crate::error::{Error, Result};

const EMBEDDED: &str = include_str!("../data/countries.csv");

#[derive(Debug, Clone, PartialEq)]
pub struct Country {
    pub name: String,
    pub iso2: String,
    pub lat: f64,
    pub lon: f64,
}

#[derive(Debug, Clone)]
pub struct CountryTable {
    countries: Vec<Country>,
    lookup: HashMap<String, usize>,
}

fn key(s: &str) -> String {
    collapse_whitespace(&fold_diacritics(s).to_lowercase().replace(['.', '(', ')'], " "))
}

impl CountryTable {
    /// Parse `name,iso2,lat,lon,alias|alias` lines; `#` starts a comment line.
    pub fn from_csv(text: &str) -> Result<Self> {
        let mut countries = Vec::new();
        let mut lookup = HashMap::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.splitn(5, ',').collect();
            let bad = || Error::Parse {
                location: crate::error::Location::Line(lineno + 1),
                message: format!("malformed country row `{line}`"),
            };
            if cols.len() < 4 {
                return Err(bad());
            }
            let lat: f64 = cols[2].trim().parse().map_err(|_| bad())?;
            let lon: f64 = cols[3].trim().parse().map_err(|_| bad())?;
            let idx = countries.len();
            let name = key(cols[0]);
            countries.push(Country { name: name.clone(), iso2: cols[1].trim().to_uppercase(), lat, lon });
            lookup.insert(name, idx);
            lookup.insert(cols[1].trim().to_lowercase(), idx);
            if let Some(aliases) = cols.get(4) {
                for alias in aliases.split('|').map(key).filter(|a| !a.is_empty()) {
                    lookup.insert(alias, idx);
                }
            }
        }
        Ok(CountryTable { countries, lookup })
    }

    pub fn embedded() -> &'static CountryTable {
        static TABLE: OnceLock<CountryTable> = OnceLock::new();
        TABLE.get_or_init(|| CountryTable::from_csv(EMBEDDED).expect("embedded country table parses"))
    }

    pub fn len(&self) -> usize {
        self.countries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.countries.is_empty()
    }

    pub fn countries(&self) -> &[Country] {
        &self.countries
    }

    /// Exact lookup by name, alias or ISO code, case- and diacritic-insensitive.
    pub fn lookup(&self, name: &str) -> Option<&Country> {
        self.lookup.get(&key(name)).map(|&i| &self.countries[i])
    }

    /// Country of an affiliation string: its last comma-separated token, matched
    /// whole or by trailing words (`"CA 94305 USA"` matches `usa`).
    pub fn match_affiliation(&self, affiliation: &str) -> Option<&Country> {
        let cleaned = strip_contact(affiliation);
        let last = cleaned.rsplit(',').next()?.trim().trim_end_matches('.').trim();
        if last.is_empty() {
            return None;
        }
        if let Some(c) = self.lookup(last) {
            return Some(c);
        }
        let k = key(last);
        let words: Vec<&str> = k.split(' ').collect();
        (1..words.len().min(5))
            .rev()
            .find_map(|n| self.lookup.get(&words[words.len() - n..].join(" ")))
            .map(|&i| &self.countries[i])
    }
}

/// Drop e-mail addresses and "Electronic address:" trailers that MEDLINE appends.
fn strip_contact(s: &str) -> String {
    let s = match s.find("Electronic address") {
        Some(i) => &s[..i],
        None => s,
    };
    s.split_whitespace()
        .filter(|w| !w.contains('@'))
        .collect::<Vec<_>>()
        .join(" ")
        .trim_end_matches(['.', ' ', ';'])
        .to_string()
}
