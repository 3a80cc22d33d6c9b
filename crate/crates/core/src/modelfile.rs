//! Line-oriented model files.
//!
//! Blank lines and `#` comments are ignored. Every other line is a key
//! followed by whitespace-separated arguments:
//!
//! ```text
//! stat edges -0.5
//! stat kstar 2 0.25
//! bias baseline 0.125
//! bias sibling 0.1
//! ```
//!
//! For `stat` lines the last argument is θ and anything between the kind and
//! θ is passed to the statistic's constructor.

use crate::biased::{BiasModel, BiasRegistry};
use crate::error::{Error, Result};
use crate::statistics::{ModelSpec, StatisticRegistry};

#[derive(Clone, Debug, PartialEq)]
pub struct Entry {
    pub line: usize,
    pub key: String,
    pub args: Vec<String>,
}

impl Entry {
    pub fn error(&self, msg: impl Into<String>) -> Error {
        Error::Parse {
            line: self.line,
            msg: msg.into(),
        }
    }

    pub fn number(&self, idx: usize) -> Result<f64> {
        let tok = self
            .args
            .get(idx)
            .ok_or_else(|| self.error(format!("`{}` needs argument {}", self.key, idx + 1)))?;
        tok.parse()
            .map_err(|_| self.error(format!("`{tok}` is not a number")))
    }

    pub fn integer(&self, idx: usize) -> Result<u64> {
        let tok = self
            .args
            .get(idx)
            .ok_or_else(|| self.error(format!("`{}` needs argument {}", self.key, idx + 1)))?;
        tok.parse()
            .map_err(|_| self.error(format!("`{tok}` is not a nonnegative integer")))
    }
}

pub fn entries(text: &str) -> Vec<Entry> {
    text.lines()
        .enumerate()
        .filter_map(|(k, raw)| {
            let content = raw.split('#').next().unwrap_or("");
            let mut toks = content.split_whitespace();
            let key = toks.next()?.to_ascii_lowercase();
            Some(Entry {
                line: k + 1,
                key,
                args: toks.map(str::to_string).collect(),
            })
        })
        .collect()
}

/// Builds an ERG model from the `stat` entries, ignoring other keys.
pub fn model_from_entries(entries: &[Entry], registry: &StatisticRegistry) -> Result<ModelSpec> {
    let mut stats = Vec::new();
    let mut theta = Vec::new();
    for e in entries.iter().filter(|e| e.key == "stat") {
        let (kind, rest) = e
            .args
            .split_first()
            .ok_or_else(|| e.error("`stat` needs a kind and a parameter"))?;
        let (last, params) = rest
            .split_last()
            .ok_or_else(|| e.error(format!("`stat {kind}` needs a parameter value")))?;
        let params: Vec<&str> = params.iter().map(String::as_str).collect();
        stats.push(registry.create(kind, &params).map_err(|err| e.error(err.to_string()))?);
        theta.push(
            last.parse::<f64>()
                .map_err(|_| e.error(format!("`{last}` is not a number")))?,
        );
    }
    ModelSpec::new(stats, theta)
}

/// Builds a bias model from the `bias` entries, ignoring other keys.
pub fn bias_model_from_entries(entries: &[Entry], registry: &BiasRegistry) -> Result<BiasModel> {
    let mut stats = Vec::new();
    let mut probs = Vec::new();
    for e in entries.iter().filter(|e| e.key == "bias") {
        if e.args.len() != 2 {
            return Err(e.error("expected `bias <kind> <probability>`"));
        }
        stats.push(registry.create(&e.args[0]).map_err(|err| e.error(err.to_string()))?);
        probs.push(e.number(1)?);
    }
    BiasModel::new(stats, probs)
}

fn reject_other_keys(entries: &[Entry], allowed: &str) -> Result<()> {
    match entries.iter().find(|e| e.key != allowed) {
        Some(e) => Err(e.error(format!("unexpected key `{}`", e.key))),
        None => Ok(()),
    }
}

/// Parses a file consisting only of `stat` lines.
pub fn parse_model(text: &str, registry: &StatisticRegistry) -> Result<ModelSpec> {
    let es = entries(text);
    reject_other_keys(&es, "stat")?;
    model_from_entries(&es, registry)
}

/// Parses a file consisting only of `bias` lines.
pub fn parse_bias_model(text: &str, registry: &BiasRegistry) -> Result<BiasModel> {
    let es = entries(text);
    reject_other_keys(&es, "bias")?;
    bias_model_from_entries(&es, registry)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_stat_lines() {
        let m = parse_model(
            "# two-star model\nstat edges -0.5\nstat kstar 2 0.25   # clustering\n\nstat triangle 0.1\n",
            &StatisticRegistry::default(),
        )
        .unwrap();
        assert_eq!(m.stat_names(), ["edges", "kstar2", "triangle"]);
        assert_eq!(m.theta(), &[-0.5, 0.25, 0.1]);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let reg = StatisticRegistry::default();
        match parse_model("stat edges 1\nstat kstar x 0.2\n", &reg) {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("{other:?}"),
        }
        assert!(parse_model("stat edges\n", &reg).is_err());
        assert!(parse_model("stat edges abc\n", &reg).is_err());
        assert!(parse_model("bias baseline 0.1\n", &reg).is_err());
        assert!(parse_model("", &reg).is_err());
    }

    #[test]
    fn parses_bias_lines() {
        let m = parse_bias_model("bias baseline 0.125\nbias sibling 0.1\n", &BiasRegistry::default())
            .unwrap();
        assert_eq!(m.theta_star(), &[0.125, 0.1]);
        assert!(parse_bias_model("bias sibling 1.2\n", &BiasRegistry::default()).is_err());
        assert!(parse_bias_model("bias sibling\n", &BiasRegistry::default()).is_err());
    }
}
