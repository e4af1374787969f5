//! Minimal flag parsing: `--key value` pairs plus boolean switches, with
//! strict validation so typos exit with usage text instead of being
//! silently ignored.

use std::collections::{HashMap, HashSet};

#[derive(Debug)]
pub struct Args {
    values: HashMap<String, String>,
    switches: HashSet<String>,
}

impl Args {
    /// Parses `tokens`, treating names in `switch_names` as boolean
    /// switches and everything else in `value_names` as `--key value`.
    pub fn parse(
        tokens: &[String],
        value_names: &[&str],
        switch_names: &[&str],
    ) -> Result<Args, String> {
        let mut values = HashMap::new();
        let mut switches = HashSet::new();
        let mut iter = tokens.iter();
        while let Some(tok) = iter.next() {
            let Some(name) = tok.strip_prefix("--") else {
                return Err(format!("unexpected argument {tok:?}"));
            };
            if switch_names.contains(&name) {
                switches.insert(name.to_string());
            } else if value_names.contains(&name) {
                let Some(value) = iter.next() else {
                    return Err(format!("--{name} requires a value"));
                };
                values.insert(name.to_string(), value.clone());
            } else {
                return Err(format!("unknown flag --{name}"));
            }
        }
        Ok(Args { values, switches })
    }

    pub fn switch(&self, name: &str) -> bool {
        self.switches.contains(name)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.values.get(name).map(String::as_str)
    }

    pub fn required<T: std::str::FromStr>(&self, name: &str) -> Result<T, String> {
        let raw = self
            .get(name)
            .ok_or_else(|| format!("missing required flag --{name}"))?;
        raw.parse()
            .map_err(|_| format!("cannot parse --{name} value {raw:?}"))
    }

    pub fn optional<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw
                .parse()
                .map(Some)
                .map_err(|_| format!("cannot parse --{name} value {raw:?}")),
        }
    }

    /// Comma-separated list, e.g. `--sizes 1024,4096`.
    pub fn list<T: std::str::FromStr>(&self, name: &str) -> Result<Option<Vec<T>>, String> {
        match self.get(name) {
            None => Ok(None),
            Some(raw) => raw
                .split(',')
                .map(|tok| {
                    tok.trim()
                        .parse()
                        .map_err(|_| format!("cannot parse --{name} element {tok:?}"))
                })
                .collect::<Result<Vec<T>, String>>()
                .map(Some),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tokens(s: &[&str]) -> Vec<String> {
        s.iter().map(|t| t.to_string()).collect()
    }

    #[test]
    fn parses_values_and_switches() {
        let a = Args::parse(
            &tokens(&["--n", "5", "--exact", "--lambda", "0.5"]),
            &["n", "lambda"],
            &["exact"],
        )
        .unwrap();
        assert_eq!(a.required::<usize>("n").unwrap(), 5);
        assert!(a.switch("exact"));
        assert_eq!(a.required::<f64>("lambda").unwrap(), 0.5);
    }

    #[test]
    fn rejects_unknown_and_missing() {
        assert!(Args::parse(&tokens(&["--bogus", "1"]), &["n"], &[]).is_err());
        assert!(Args::parse(&tokens(&["--n"]), &["n"], &[]).is_err());
        assert!(Args::parse(&tokens(&["stray"]), &["n"], &[]).is_err());
    }

    #[test]
    fn parses_lists() {
        let a = Args::parse(&tokens(&["--sizes", "1,2,3"]), &["sizes"], &[]).unwrap();
        assert_eq!(a.list::<usize>("sizes").unwrap().unwrap(), vec![1, 2, 3]);
    }
}
