//! Flat-file formats.
//!
//! * edge list: first line `n m`, then `m` lines `i j` with `0 ≤ i < j < n`;
//! * labels: one `+1` or `-1` per line;
//! * permutation: `n` lines, line `i` holds `π(i)`.
//!
//! A family directory holds `parent.txt`, `g1.txt`, `g2_prime_{k}.txt`,
//! `g2_{k}.txt`, `pi_star_{k}.txt` for `k = 2..=K`, `labels.txt` and
//! `params.toml`.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::family::CorrelatedFamily;
use super::graph::{Graph, GraphBuilder};
use super::labeling::Labeling;
use super::params::ModelParams;
use crate::error::{Error, Result};
use crate::perm::Permutation;

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

/// Non-blank lines, trimmed, with 1-based line numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_usize(tok: Option<&str>, line: usize, what: &str) -> Result<usize> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} `{tok}`")))
}

pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (i, j) in g.edges() {
        let _ = writeln!(out, "{i} {j}");
    }
    out
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or_else(|| parse_err(1, "empty edge list"))?;
    let mut toks = header.split_whitespace();
    let n = parse_usize(toks.next(), hl, "vertex count")?;
    let m = parse_usize(toks.next(), hl, "edge count")?;
    let mut b = GraphBuilder::new(n);
    let mut seen = 0;
    for (ln, line) in lines {
        let mut toks = line.split_whitespace();
        let i = parse_usize(toks.next(), ln, "endpoint")?;
        let j = parse_usize(toks.next(), ln, "endpoint")?;
        if toks.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if i >= j || j >= n {
            return Err(parse_err(ln, format!("need 0 <= i < j < {n}, got {i} {j}")));
        }
        if b.has_edge(i, j) {
            return Err(parse_err(ln, format!("duplicate edge {i} {j}")));
        }
        b.add_edge(i, j);
        seen += 1;
    }
    if seen != m {
        return Err(parse_err(hl, format!("header promises {m} edges, found {seen}")));
    }
    Ok(b.build())
}

pub fn write_labels(labels: &Labeling) -> String {
    labels.as_slice().iter().map(|&s| if s > 0 { "+1\n" } else { "-1\n" }).collect()
}

pub fn parse_labels(text: &str) -> Result<Labeling> {
    let sigma = content_lines(text)
        .map(|(ln, l)| match l {
            "+1" | "1" | "+" => Ok(1),
            "-1" | "-" => Ok(-1),
            other => Err(parse_err(ln, format!("label must be +1 or -1, got `{other}`"))),
        })
        .collect::<Result<Vec<i8>>>()?;
    Labeling::new(sigma)
}

pub fn write_permutation(pi: &Permutation) -> String {
    pi.as_slice().iter().map(|v| format!("{v}\n")).collect()
}

pub fn parse_permutation(text: &str) -> Result<Permutation> {
    let map = content_lines(text)
        .map(|(ln, l)| l.parse::<usize>().map_err(|_| parse_err(ln, format!("bad image `{l}`"))))
        .collect::<Result<Vec<_>>>()?;
    Permutation::new(map)
}

pub fn read_graph(path: &Path) -> Result<Graph> {
    parse_edge_list(&fs::read_to_string(path)?)
}

pub fn write_graph(path: &Path, g: &Graph) -> Result<()> {
    Ok(fs::write(path, write_edge_list(g))?)
}

pub fn read_permutation(path: &Path) -> Result<Permutation> {
    parse_permutation(&fs::read_to_string(path)?)
}

pub fn read_labels(path: &Path) -> Result<Labeling> {
    parse_labels(&fs::read_to_string(path)?)
}

/// Writes every component of `family` into `dir`, creating it if needed.
pub fn write_family(dir: &Path, family: &CorrelatedFamily) -> Result<()> {
    fs::create_dir_all(dir)?;
    let params = toml::to_string(&family.params).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(dir.join("params.toml"), params)?;
    fs::write(dir.join("labels.txt"), write_labels(&family.labels))?;
    write_graph(&dir.join("parent.txt"), &family.parent)?;
    write_graph(&dir.join("g1.txt"), &family.g1)?;
    for (idx, ((gp, g), pi)) in family.g_prime.iter().zip(&family.g_relabelled).zip(&family.pi_star).enumerate() {
        let k = idx + 2;
        write_graph(&dir.join(format!("g2_prime_{k}.txt")), gp)?;
        write_graph(&dir.join(format!("g2_{k}.txt")), g)?;
        fs::write(dir.join(format!("pi_star_{k}.txt")), write_permutation(pi))?;
    }
    Ok(())
}

/// Reads a directory produced by [`write_family`] and re-validates it.
pub fn read_family(dir: &Path) -> Result<CorrelatedFamily> {
    let text = fs::read_to_string(dir.join("params.toml"))?;
    let params: ModelParams = toml::from_str(&text).map_err(|e| Error::Config(e.to_string()))?;
    let labels = read_labels(&dir.join("labels.txt"))?;
    let parent = read_graph(&dir.join("parent.txt"))?;
    let g1 = read_graph(&dir.join("g1.txt"))?;
    let mut g_prime = Vec::new();
    let mut g_relabelled = Vec::new();
    let mut pi_star = Vec::new();
    for k in 2..=params.k_graphs() {
        g_prime.push(read_graph(&dir.join(format!("g2_prime_{k}.txt")))?);
        g_relabelled.push(read_graph(&dir.join(format!("g2_{k}.txt")))?);
        pi_star.push(read_permutation(&dir.join(format!("pi_star_{k}.txt")))?);
    }
    CorrelatedFamily::from_parts(params, labels, parent, g1, g_prime, g_relabelled, pi_star)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{generate_family, Scaling};
    use crate::rng::stream;

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(5, [(0, 1), (1, 4), (2, 3)]).unwrap();
        let text = write_edge_list(&g);
        assert_eq!(text, "5 3\n0 1\n1 4\n2 3\n");
        assert_eq!(parse_edge_list(&text).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        for bad in ["", "3 1\n1 0\n", "3 1\n0 3\n", "3 2\n0 1\n", "3 2\n0 1\n0 1\n", "3 1\n0 x\n", "3 1\n0 1 2\n"] {
            assert!(matches!(parse_edge_list(bad), Err(Error::Parse { .. })), "{bad:?}");
        }
    }

    #[test]
    fn labels_and_permutations() {
        let l = Labeling::new(vec![1, -1, -1, 1]).unwrap();
        assert_eq!(parse_labels(&write_labels(&l)).unwrap(), l);
        assert!(parse_labels("+1\n0\n").is_err());
        let pi = Permutation::new(vec![2, 0, 1]).unwrap();
        assert_eq!(write_permutation(&pi), "2\n0\n1\n");
        assert_eq!(parse_permutation("2\n0\n1\n").unwrap(), pi);
        assert!(parse_permutation("0\n0\n").is_err());
    }

    #[test]
    fn family_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let params = ModelParams::new(40, 0.3, 0.1, 0.7, 3, Scaling::RawProbability).unwrap();
        let f = generate_family(&params, &mut stream(9)).unwrap();
        write_family(dir.path(), &f).unwrap();
        assert_eq!(read_family(dir.path()).unwrap(), f);
    }
}
