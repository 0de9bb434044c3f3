//! Tab- and comma-separated file formats.

use std::collections::{BTreeSet, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::evaluation::{ConcordanceCurve, DistanceStability, PairwiseOverlap};
use crate::exchangeability::{ExchangeabilityMatrix, MatrixKind, MatrixMeta, Metric, PlotPoint};
use crate::framework::Contribution;
use crate::model::{Ranking, Universe};
use crate::stats::{LabeledDataset, PositionVectors};

/// Fractional digits kept when scores are persisted.
pub const SCORE_DIGITS: usize = 6;

const MATRIX_TAG: &str = "# exchlist-matrix";

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> Error + '_ {
    move |source| Error::Io {
        path: path.to_path_buf(),
        source,
    }
}

fn parse_err(path: &Path, line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        line,
        column,
        message: message.into(),
    }
}

/// Non-empty lines with their 1-based line numbers.
fn read_lines(path: &Path) -> Result<Vec<(usize, String)>> {
    let file = File::open(path).map_err(io_err(path))?;
    let mut out = Vec::new();
    for (k, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(io_err(path))?;
        let line = line.trim_end_matches('\r');
        if !line.trim().is_empty() {
            out.push((k + 1, line.to_string()));
        }
    }
    Ok(out)
}

fn parse_finite(path: &Path, line: usize, column: usize, cell: &str) -> Result<f64> {
    match cell.trim().parse::<f64>() {
        Ok(v) if v.is_finite() => Ok(v),
        _ => Err(parse_err(path, line, column, format!("'{cell}' is not a finite number"))),
    }
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<()> {
    let file = File::create(path).map_err(io_err(path))?;
    let mut w = BufWriter::new(file);
    body(&mut w).and_then(|_| w.flush()).map_err(io_err(path))
}

/// Expression matrix as read from disk, before labels are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct Expression {
    pub universe: Arc<Universe>,
    pub sample_ids: Vec<String>,
    /// Row-major, one row per gene.
    pub values: Vec<f64>,
}

impl Expression {
    pub fn into_dataset(self, labels: Vec<String>) -> Result<LabeledDataset> {
        LabeledDataset::new(self.universe, self.sample_ids, self.values, labels)
    }
}

/// Reads a TSV whose header holds sample ids after one leading cell and
/// whose rows are `gene\tvalue…`. Repeated genes keep the per-sample maximum.
pub fn load_expression_tsv(path: impl AsRef<Path>) -> Result<Expression> {
    let path = path.as_ref();
    let lines = read_lines(path)?;
    let Some((header_line, header)) = lines.first() else {
        return Err(parse_err(path, 1, 1, "file is empty"));
    };
    let sample_ids: Vec<String> = header.split('\t').skip(1).map(|s| s.trim().to_string()).collect();
    if sample_ids.is_empty() {
        return Err(parse_err(path, *header_line, 2, "header has no sample columns"));
    }
    let n = sample_ids.len();
    let mut ids: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut values: Vec<f64> = Vec::new();
    for (line, text) in &lines[1..] {
        let cells: Vec<&str> = text.split('\t').collect();
        if cells.len() != n + 1 {
            return Err(parse_err(
                path,
                *line,
                cells.len().min(n + 1),
                format!("expected {} fields, found {}", n + 1, cells.len()),
            ));
        }
        let gene = cells[0].trim();
        if gene.is_empty() {
            return Err(parse_err(path, *line, 1, "empty gene identifier"));
        }
        let row: Vec<f64> = cells[1..]
            .iter()
            .enumerate()
            .map(|(c, cell)| parse_finite(path, *line, c + 2, cell))
            .collect::<Result<_>>()?;
        match index.get(gene) {
            Some(&i) => {
                for (old, new) in values[i * n..(i + 1) * n].iter_mut().zip(row) {
                    *old = old.max(new);
                }
            }
            None => {
                index.insert(gene.to_string(), ids.len());
                ids.push(gene.to_string());
                values.extend(row);
            }
        }
    }
    if ids.is_empty() {
        return Err(parse_err(path, header_line + 1, 1, "no gene rows"));
    }
    Ok(Expression {
        universe: Arc::new(Universe::new(ids)?),
        sample_ids,
        values,
    })
}

/// Gene identifiers from the first column of an expression TSV, in the
/// order [`load_expression_tsv`] assigns them.
pub fn load_universe(path: impl AsRef<Path>) -> Result<Universe> {
    let path = path.as_ref();
    let lines = read_lines(path)?;
    if lines.len() < 2 {
        return Err(parse_err(path, 1, 1, "no gene rows"));
    }
    let mut seen = BTreeSet::new();
    let mut ids = Vec::new();
    for (line, text) in &lines[1..] {
        let gene = text.split('\t').next().unwrap_or("").trim();
        if gene.is_empty() {
            return Err(parse_err(path, *line, 1, "empty gene identifier"));
        }
        if seen.insert(gene.to_string()) {
            ids.push(gene.to_string());
        }
    }
    Universe::new(ids)
}

pub fn save_expression_tsv(path: impl AsRef<Path>, ds: &LabeledDataset) -> Result<()> {
    write_file(path.as_ref(), |w| {
        write!(w, "gene")?;
        for s in ds.sample_ids() {
            write!(w, "\t{s}")?;
        }
        writeln!(w)?;
        for i in 0..ds.n_vars() {
            write!(w, "{}", ds.universe().id(i))?;
            for v in ds.row(i) {
                write!(w, "\t{v}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

/// Reads `sample\tclass` lines (optional `sample\tclass` header) and aligns
/// them to `sample_ids`.
pub fn load_labels(path: impl AsRef<Path>, sample_ids: &[String]) -> Result<Vec<String>> {
    let path = path.as_ref();
    let mut by_sample: HashMap<String, (usize, String)> = HashMap::new();
    for (k, (line, text)) in read_lines(path)?.into_iter().enumerate() {
        let cells: Vec<&str> = text.split('\t').map(str::trim).collect();
        if k == 0 && cells == ["sample", "class"] {
            continue;
        }
        if cells.len() != 2 {
            return Err(parse_err(path, line, 1, format!("expected 2 fields, found {}", cells.len())));
        }
        if by_sample.insert(cells[0].to_string(), (line, cells[1].to_string())).is_some() {
            return Err(parse_err(path, line, 1, format!("duplicate sample '{}'", cells[0])));
        }
    }
    let known: BTreeSet<&str> = sample_ids.iter().map(String::as_str).collect();
    if let Some((s, (line, _))) = by_sample.iter().find(|(s, _)| !known.contains(s.as_str())) {
        return Err(parse_err(path, *line, 1, format!("unknown sample '{s}'")));
    }
    let labels: Vec<String> = sample_ids
        .iter()
        .map(|s| {
            by_sample
                .get(s)
                .map(|(_, c)| c.clone())
                .ok_or_else(|| Error::invalid(format!("{}: no label for sample '{s}'", path.display())))
        })
        .collect::<Result<_>>()?;
    let classes: BTreeSet<&String> = labels.iter().collect();
    if classes.len() != 2 {
        return Err(Error::invalid(format!(
            "{}: expected exactly 2 classes, found {}",
            path.display(),
            classes.len()
        )));
    }
    Ok(labels)
}

pub fn save_labels(path: impl AsRef<Path>, ds: &LabeledDataset) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "sample\tclass")?;
        for (s, l) in ds.sample_ids().iter().zip(ds.labels()) {
            writeln!(w, "{s}\t{l}")?;
        }
        Ok(())
    })
}

/// Expression TSV plus labels TSV.
pub fn load_dataset(expression: impl AsRef<Path>, labels: impl AsRef<Path>) -> Result<LabeledDataset> {
    let expr = load_expression_tsv(expression)?;
    let labels = load_labels(labels, &expr.sample_ids)?;
    expr.into_dataset(labels)
}

/// `gene\tposition\tscore`, best first.
pub fn save_ranking(path: impl AsRef<Path>, universe: &Universe, r: &Ranking) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "gene\tposition\tscore")?;
        for i in r.order() {
            write!(w, "{}\t{}\t", universe.id(i), r.position(i))?;
            if let Some(s) = r.scores() {
                write!(w, "{}", s[i])?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn load_ranking(path: impl AsRef<Path>, universe: &Universe) -> Result<Ranking> {
    let path = path.as_ref();
    let m = universe.len();
    let mut positions = vec![0usize; m];
    let mut scores = vec![f64::NAN; m];
    let mut seen = 0;
    for (k, (line, text)) in read_lines(path)?.into_iter().enumerate() {
        if k == 0 && text.starts_with("gene\t") {
            continue;
        }
        let cells: Vec<&str> = text.split('\t').collect();
        if !(2..=3).contains(&cells.len()) {
            return Err(parse_err(path, line, 1, "expected gene, position and optional score"));
        }
        let i = universe
            .index_of(cells[0].trim())
            .ok_or_else(|| parse_err(path, line, 1, format!("unknown gene '{}'", cells[0])))?;
        if positions[i] != 0 {
            return Err(parse_err(path, line, 1, format!("duplicate gene '{}'", cells[0])));
        }
        positions[i] = cells[1]
            .trim()
            .parse()
            .map_err(|_| parse_err(path, line, 2, format!("'{}' is not a position", cells[1])))?;
        if let Some(cell) = cells.get(2).filter(|c| !c.trim().is_empty()) {
            scores[i] = parse_finite(path, line, 3, cell)?;
        }
        seen += 1;
    }
    if seen != m {
        return Err(Error::UniverseMismatch(format!(
            "{}: ranking lists {seen} of {m} genes",
            path.display()
        )));
    }
    let ranking = Ranking::from_positions(positions)?;
    if scores.iter().all(|s| s.is_finite()) {
        ranking.with_scores(scores)
    } else {
        Ok(ranking)
    }
}

/// `gene\tround_1…round_B`.
pub fn save_position_vectors(path: impl AsRef<Path>, universe: &Universe, pv: &PositionVectors) -> Result<()> {
    write_file(path.as_ref(), |w| {
        write!(w, "gene")?;
        for b in 1..=pv.rounds() {
            write!(w, "\tround_{b}")?;
        }
        writeln!(w)?;
        for i in 0..pv.n_vars() {
            write!(w, "{}", universe.id(i))?;
            for p in pv.row(i) {
                write!(w, "\t{p}")?;
            }
            writeln!(w)?;
        }
        Ok(())
    })
}

pub fn load_position_vectors(path: impl AsRef<Path>, universe: &Universe) -> Result<PositionVectors> {
    let path = path.as_ref();
    let lines = read_lines(path)?;
    let Some((_, header)) = lines.first() else {
        return Err(parse_err(path, 1, 1, "file is empty"));
    };
    let rounds = header.split('\t').count() - 1;
    let m = universe.len();
    let mut data = vec![0u32; m * rounds];
    let mut seen = vec![false; m];
    for (line, text) in &lines[1..] {
        let cells: Vec<&str> = text.split('\t').collect();
        if cells.len() != rounds + 1 {
            return Err(parse_err(path, *line, 1, format!("expected {} fields", rounds + 1)));
        }
        let i = universe
            .index_of(cells[0].trim())
            .ok_or_else(|| parse_err(path, *line, 1, format!("unknown gene '{}'", cells[0])))?;
        if std::mem::replace(&mut seen[i], true) {
            return Err(parse_err(path, *line, 1, format!("duplicate gene '{}'", cells[0])));
        }
        for (b, cell) in cells[1..].iter().enumerate() {
            data[i * rounds + b] = cell
                .trim()
                .parse()
                .map_err(|_| parse_err(path, *line, b + 2, format!("'{cell}' is not a position")))?;
        }
    }
    if seen.iter().any(|s| !s) {
        return Err(Error::UniverseMismatch(format!(
            "{}: position vectors missing for some genes",
            path.display()
        )));
    }
    PositionVectors::from_rows(m, rounds, data)
}

fn quantize(v: f64) -> f64 {
    format!("{v:.SCORE_DIGITS$}").parse().expect("formatted float parses")
}

/// The matrix as it reads back after saving: scores rounded to
/// [`SCORE_DIGITS`] places, entries rounding to zero dropped.
pub fn quantized(mx: &ExchangeabilityMatrix) -> ExchangeabilityMatrix {
    ExchangeabilityMatrix::from_triplets(
        mx.dim(),
        mx.upper_triplets().map(|(i, j, v)| (i, j, quantize(v))),
        mx.meta().clone(),
    )
    .expect("rounding keeps scores in [0, 1]")
}

fn format_meta(meta: &MatrixMeta, m: usize) -> String {
    let opt = |v: Option<String>| v.unwrap_or_else(|| "-".into());
    format!(
        "{MATRIX_TAG} kind={} m={m} rounds={} metric={} seed={} threshold={}",
        meta.kind,
        opt(meta.rounds.map(|r| r.to_string())),
        opt(meta.metric.map(|x| x.to_string())),
        opt(meta.seed.map(|s| s.to_string())),
        meta.threshold
    )
}

fn parse_meta(path: &Path, line: &str) -> Result<(MatrixMeta, usize)> {
    let bad = |msg: String| parse_err(path, 1, 1, msg);
    let rest = line
        .strip_prefix(MATRIX_TAG)
        .ok_or_else(|| bad(format!("first line must start with '{MATRIX_TAG}'")))?;
    let fields: HashMap<&str, &str> = rest
        .split_whitespace()
        .filter_map(|kv| kv.split_once('='))
        .collect();
    let get = |k: &str| fields.get(k).copied().ok_or_else(|| bad(format!("metadata lacks '{k}'")));
    let opt = |k: &str| -> Result<Option<&str>> { get(k).map(|v| (v != "-").then_some(v)) };
    let num = |k: &str, v: &str| -> Result<u64> { v.parse().map_err(|_| bad(format!("bad {k} '{v}'"))) };
    let kind: MatrixKind = get("kind")?.parse().map_err(|e: Error| bad(e.to_string()))?;
    let m = num("m", get("m")?)? as usize;
    let rounds = opt("rounds")?.map(|v| num("rounds", v)).transpose()?.map(|r| r as usize);
    let metric = opt("metric")?
        .map(|v| v.parse::<Metric>().map_err(|e| bad(e.to_string())))
        .transpose()?;
    let seed = opt("seed")?.map(|v| num("seed", v)).transpose()?;
    let threshold = get("threshold")?
        .parse()
        .map_err(|_| bad("bad threshold".into()))?;
    Ok((
        MatrixMeta {
            kind,
            rounds,
            metric,
            seed,
            threshold,
        },
        m,
    ))
}

/// Metadata line, then `gene_i\tgene_j\tscore` for stored pairs `i < j`.
pub fn save_exchangeability_matrix(
    path: impl AsRef<Path>,
    universe: &Universe,
    mx: &ExchangeabilityMatrix,
) -> Result<()> {
    if universe.len() != mx.dim() {
        return Err(Error::DimensionMismatch {
            expected: universe.len(),
            found: mx.dim(),
        });
    }
    write_file(path.as_ref(), |w| {
        writeln!(w, "{}", format_meta(mx.meta(), mx.dim()))?;
        for (i, j, v) in mx.upper_triplets() {
            let q = quantize(v);
            if q > 0.0 {
                writeln!(w, "{}\t{}\t{q:.SCORE_DIGITS$}", universe.id(i), universe.id(j))?;
            }
        }
        Ok(())
    })
}

pub fn load_exchangeability_matrix(path: impl AsRef<Path>, universe: &Universe) -> Result<ExchangeabilityMatrix> {
    let path = path.as_ref();
    let lines = read_lines(path)?;
    let Some((_, first)) = lines.first() else {
        return Err(parse_err(path, 1, 1, "file is empty"));
    };
    let (meta, m) = parse_meta(path, first)?;
    if m != universe.len() {
        return Err(Error::UniverseMismatch(format!(
            "{}: matrix over {m} genes, universe has {}",
            path.display(),
            universe.len()
        )));
    }
    let mut triplets = Vec::with_capacity(lines.len() - 1);
    let mut seen = BTreeSet::new();
    for (line, text) in &lines[1..] {
        let cells: Vec<&str> = text.split('\t').collect();
        if cells.len() != 3 {
            return Err(parse_err(path, *line, 1, "expected gene_i, gene_j and score"));
        }
        let gene = |c: usize| {
            universe
                .index_of(cells[c].trim())
                .ok_or_else(|| parse_err(path, *line, c + 1, format!("unknown gene '{}'", cells[c])))
        };
        let (i, j) = (gene(0)?, gene(1)?);
        if i >= j {
            return Err(parse_err(path, *line, 1, "row must satisfy i < j in universe order"));
        }
        let v = parse_finite(path, *line, 3, cells[2])?;
        if !(0.0..=1.0).contains(&v) {
            return Err(parse_err(path, *line, 3, format!("score {v} outside [0, 1]")));
        }
        if !seen.insert((i, j)) {
            return Err(parse_err(path, *line, 1, "duplicate pair"));
        }
        triplets.push((i, j, v));
    }
    ExchangeabilityMatrix::from_triplets(m, triplets, meta)
}

/// `gene\tvalue`.
pub fn save_list_vector(path: impl AsRef<Path>, universe: &Universe, values: &[f64]) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "gene\tvalue")?;
        for (i, v) in values.iter().enumerate() {
            writeln!(w, "{}\t{v}", universe.id(i))?;
        }
        Ok(())
    })
}

pub fn load_list_vector(path: impl AsRef<Path>, universe: &Universe) -> Result<Vec<f64>> {
    let path = path.as_ref();
    let mut values = vec![f64::NAN; universe.len()];
    for (k, (line, text)) in read_lines(path)?.into_iter().enumerate() {
        if k == 0 && text.starts_with("gene\t") {
            continue;
        }
        let cells: Vec<&str> = text.split('\t').collect();
        if cells.len() != 2 {
            return Err(parse_err(path, line, 1, "expected gene and value"));
        }
        let i = universe
            .index_of(cells[0].trim())
            .ok_or_else(|| parse_err(path, line, 1, format!("unknown gene '{}'", cells[0])))?;
        values[i] = parse_finite(path, line, 2, cells[1])?;
    }
    if values.iter().any(|v| v.is_nan()) {
        return Err(Error::UniverseMismatch(format!(
            "{}: list vector missing genes",
            path.display()
        )));
    }
    Ok(values)
}

/// One gene identifier per line (tabs: first field), in list order.
pub fn load_gene_list(path: impl AsRef<Path>, universe: &Universe) -> Result<Vec<usize>> {
    let path = path.as_ref();
    let mut out = Vec::new();
    for (line, text) in read_lines(path)? {
        let id = text.split('\t').next().unwrap_or("").trim();
        if id.starts_with('#') {
            continue;
        }
        out.push(
            universe
                .index_of(id)
                .ok_or_else(|| parse_err(path, line, 1, format!("unknown gene '{id}'")))?,
        );
    }
    Ok(out)
}

/// `gene\tcontribution\tpos_list1\tpos_list2`.
pub fn save_contributions(path: impl AsRef<Path>, universe: &Universe, rows: &[Contribution]) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "gene\tcontribution\tpos_list1\tpos_list2")?;
        for c in rows {
            let (p1, p2) = c
                .positions
                .map_or((String::new(), String::new()), |(a, b)| (a.to_string(), b.to_string()));
            writeln!(w, "{}\t{}\t{p1}\t{p2}", universe.id(c.gene), c.value)?;
        }
        Ok(())
    })
}

/// `set,round,x,y`.
pub fn save_plot_csv(path: impl AsRef<Path>, points: &[PlotPoint]) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "set,round,x,y")?;
        for p in points {
            writeln!(w, "{},{},{},{}", p.set, p.round, p.x, p.y)?;
        }
        Ok(())
    })
}

/// `k,f_top,f_bottom`.
pub fn save_concordance_csv(path: impl AsRef<Path>, top: &ConcordanceCurve, bottom: &ConcordanceCurve) -> Result<()> {
    if top.f.len() != bottom.f.len() {
        return Err(Error::DimensionMismatch {
            expected: top.f.len(),
            found: bottom.f.len(),
        });
    }
    write_file(path.as_ref(), |w| {
        writeln!(w, "k,f_top,f_bottom")?;
        for (k, (t, b)) in top.f.iter().zip(&bottom.f).enumerate() {
            writeln!(w, "{},{t},{b}", k + 1)?;
        }
        Ok(())
    })
}

/// `pair_a,pair_b,overlap_top,overlap_bottom` with 1-based replicate numbers.
pub fn save_overlap_csv(path: impl AsRef<Path>, top: &PairwiseOverlap, bottom: &PairwiseOverlap) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "pair_a,pair_b,overlap_top,overlap_bottom")?;
        for (t, b) in top.pairs.iter().zip(&bottom.pairs) {
            writeln!(w, "{},{},{},{}", t.0 + 1, t.1 + 1, t.2, b.2)?;
        }
        Ok(())
    })
}

/// `comparison,variant,distance`.
pub fn save_distance_csv(path: impl AsRef<Path>, d: &DistanceStability) -> Result<()> {
    write_file(path.as_ref(), |w| {
        writeln!(w, "comparison,variant,distance")?;
        for s in &d.samples {
            writeln!(w, "{},{},{}", s.comparison.name(), s.variant.name(), s.distance)?;
        }
        Ok(())
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchangeability::Measure;
    use std::fs;
    use std::path::PathBuf;

    fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
        let p = dir.join(name);
        fs::write(&p, body).unwrap();
        p
    }

    #[test]
    fn expression_examples() {
        let dir = tempfile::tempdir().unwrap();
        let p = write(dir.path(), "a.tsv", "gene\ts1\ts2\ng1\t1\t2\ng2\t3\t4\n");
        let e = load_expression_tsv(&p).unwrap();
        assert_eq!(e.universe.len(), 2);
        assert_eq!(e.values, vec![1.0, 2.0, 3.0, 4.0]);

        let p = write(dir.path(), "dup.tsv", "gene\ts1\ts2\ng1\t1\t2\ng2\t5\t5\ng1\t3\t0\n");
        let e = load_expression_tsv(&p).unwrap();
        assert_eq!(e.universe.len(), 2);
        assert_eq!(e.values, vec![3.0, 2.0, 5.0, 5.0]);
        assert_eq!(load_universe(&p).unwrap(), *e.universe);

        let p = write(dir.path(), "bad.tsv", "gene\ts1\ts2\ng1\t1\t2\ng2\tx\t4\n");
        match load_expression_tsv(&p) {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (3, 2)),
            other => panic!("{other:?}"),
        }
        let p = write(dir.path(), "ragged.tsv", "gene\ts1\ts2\ng1\t1\n");
        assert!(matches!(load_expression_tsv(&p), Err(Error::Parse { line: 2, .. })));
        let p = write(dir.path(), "empty.tsv", "");
        assert!(matches!(load_expression_tsv(&p), Err(Error::Parse { .. })));
        assert!(matches!(load_expression_tsv(dir.path().join("none")), Err(Error::Io { .. })));
    }

    #[test]
    fn label_examples() {
        let dir = tempfile::tempdir().unwrap();
        let ids: Vec<String> = ["s1", "s2", "s3", "s4"].iter().map(|s| s.to_string()).collect();
        let p = write(dir.path(), "l.tsv", "sample\tclass\ns3\tb\ns1\ta\ns4\tb\ns2\ta\n");
        assert_eq!(load_labels(&p, &ids).unwrap(), vec!["a", "a", "b", "b"]);
        let p = write(dir.path(), "l3.tsv", "s1\ta\ns2\tb\ns3\tc\ns4\tc\n");
        assert!(load_labels(&p, &ids).is_err());
        let p = write(dir.path(), "lu.tsv", "s1\ta\ns2\ta\ns3\tb\ns4\tb\ns9\tb\n");
        assert!(load_labels(&p, &ids).is_err());
        let p = write(dir.path(), "lm.tsv", "s1\ta\ns2\ta\ns3\tb\n");
        assert!(load_labels(&p, &ids).is_err());
    }

    #[test]
    fn matrix_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let u = Universe::numbered(4).unwrap();
        let meta = MatrixMeta {
            kind: MatrixKind::Exchangeability(Measure::OedMean),
            rounds: Some(20),
            metric: Some(Metric::Euclidean),
            seed: Some(7),
            threshold: 0.05,
        };
        let empty = ExchangeabilityMatrix::from_triplets(4, vec![], meta.clone()).unwrap();
        let p = dir.path().join("e.tsv");
        save_exchangeability_matrix(&p, &u, &empty).unwrap();
        assert_eq!(fs::read_to_string(&p).unwrap().lines().count(), 1);
        assert_eq!(load_exchangeability_matrix(&p, &u).unwrap(), empty);

        let one = ExchangeabilityMatrix::from_triplets(4, vec![(0, 1, 0.5)], MatrixMeta::relation()).unwrap();
        save_exchangeability_matrix(&p, &u, &one).unwrap();
        let text = fs::read_to_string(&p).unwrap();
        assert_eq!(text.lines().nth(1), Some("g1\tg2\t0.500000"));
        assert_eq!(load_exchangeability_matrix(&p, &u).unwrap(), one);

        let noisy = ExchangeabilityMatrix::from_triplets(
            4,
            vec![(0, 2, 1.0 / 3.0), (1, 3, 0.0000004), (2, 3, 0.9999996)],
            meta,
        )
        .unwrap();
        save_exchangeability_matrix(&p, &u, &noisy).unwrap();
        assert_eq!(load_exchangeability_matrix(&p, &u).unwrap(), quantized(&noisy));

        let bad = write(dir.path(), "bad.tsv", &format!("{}\ng1\tg2\t1.25\n", format_meta(one.meta(), 4)));
        assert!(matches!(load_exchangeability_matrix(&bad, &u), Err(Error::Parse { line: 2, .. })));
        let rev = write(dir.path(), "rev.tsv", &format!("{}\ng2\tg1\t0.5\n", format_meta(one.meta(), 4)));
        assert!(matches!(load_exchangeability_matrix(&rev, &u), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn ranking_and_vectors_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let u = Universe::numbered(3).unwrap();
        let r = Ranking::from_scores(&[0.5, -1.25, 2.0]).unwrap();
        let p = dir.path().join("r.tsv");
        save_ranking(&p, &u, &r).unwrap();
        assert_eq!(load_ranking(&p, &u).unwrap(), r);

        let pv = PositionVectors::from_rankings(&[r.clone(), r.reversed()]).unwrap();
        let p = dir.path().join("pv.tsv");
        save_position_vectors(&p, &u, &pv).unwrap();
        assert_eq!(load_position_vectors(&p, &u).unwrap(), pv);

        let p = dir.path().join("l.tsv");
        let v = vec![0.1, -0.25, 1.0 / 3.0];
        save_list_vector(&p, &u, &v).unwrap();
        assert_eq!(load_list_vector(&p, &u).unwrap(), v);
    }
}
