//! Edge-list text and bitset binary encodings of [`TripartiteGraph`].
//!
//! Text layout (indices 0-based, `#` starts a comment line):
//!
//! ```text
//! tripartite <nA> <nB> <nC>
//! coords <part> <d>        # optional, once per part, then one point per line
//! <x_1> ... <x_d>
//! <pair> <i> <j>           # pair is AB, BC or AC
//! ```
//!
//! Binary layout, all integers little-endian: the 8-byte magic
//! `TRIBOOK\0`, a `u32` version, the three part sizes as `u64`, then per
//! part a `u8` coordinate flag followed (if set) by `d: u64` and `n * d`
//! `i64` values, then per family (`AB`, `BC`, `AC`) the word count as `u64`
//! and that many `u64` bitset words, rows of the first part over the second.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{BitMatrix, CoordTable, Pair, Part, TripartiteGraph};
use crate::{Error, Result};

pub const BINARY_MAGIC: &[u8; 8] = b"TRIBOOK\0";
pub const BINARY_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    Text,
    Binary,
}

pub fn to_text(g: &TripartiteGraph) -> String {
    let [na, nb, nc] = g.sizes();
    let mut out = String::new();
    writeln!(out, "tripartite {na} {nb} {nc}").unwrap();
    for part in Part::ALL {
        if let Some(t) = g.coords(part) {
            writeln!(out, "coords {} {}", part.label(), t.dim()).unwrap();
            for i in 0..t.len() {
                let row = t.row(i);
                for (k, x) in row.iter().enumerate() {
                    if k > 0 {
                        out.push(' ');
                    }
                    write!(out, "{x}").unwrap();
                }
                out.push('\n');
            }
        }
    }
    for e in g.all_edges() {
        writeln!(out, "{} {} {}", e.pair, e.i, e.j).unwrap();
    }
    out
}

fn parse_num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| Error::parse(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| Error::parse(line, format!("invalid {what} `{tok}`")))
}

pub fn from_text(text: &str) -> Result<TripartiteGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(k, l)| (k + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| Error::parse(1, "empty input, expected `tripartite nA nB nC`"))?;
    let mut toks = header.split_whitespace();
    if toks.next() != Some("tripartite") {
        return Err(Error::parse(hline, "expected header `tripartite nA nB nC`"));
    }
    let sizes: [usize; 3] = [
        parse_num(toks.next(), hline, "nA")?,
        parse_num(toks.next(), hline, "nB")?,
        parse_num(toks.next(), hline, "nC")?,
    ];
    if toks.next().is_some() {
        return Err(Error::parse(hline, "trailing tokens after header"));
    }

    let mut coords: [Option<CoordTable>; 3] = [None, None, None];
    let mut edges = Vec::new();
    while let Some((ln, line)) = lines.next() {
        let mut toks = line.split_whitespace();
        let head = toks.next().unwrap_or_default();
        if head == "coords" {
            let part: Part = toks
                .next()
                .ok_or_else(|| Error::parse(ln, "missing part in coords block"))?
                .parse()
                .map_err(|e: Error| Error::parse(ln, e.to_string()))?;
            let d: usize = parse_num(toks.next(), ln, "dimension")?;
            if d == 0 {
                return Err(Error::parse(ln, "coordinate dimension must be positive"));
            }
            if coords[part.index()].is_some() {
                return Err(Error::parse(
                    ln,
                    format!("duplicate coords block for part {}", part.label()),
                ));
            }
            let n = sizes[part.index()];
            let mut data = Vec::with_capacity(n * d);
            for _ in 0..n {
                let (pl, pline) = lines
                    .next()
                    .ok_or_else(|| Error::parse(ln, "coordinate block ends early"))?;
                let before = data.len();
                for tok in pline.split_whitespace() {
                    data.push(parse_num::<i64>(Some(tok), pl, "coordinate")?);
                }
                if data.len() - before != d {
                    return Err(Error::parse(pl, format!("expected {d} coordinates")));
                }
            }
            coords[part.index()] = Some(CoordTable::new(d, data)?);
        } else {
            let pair: Pair = head
                .parse()
                .map_err(|_| Error::parse(ln, format!("unexpected token `{head}`")))?;
            let i: usize = parse_num(toks.next(), ln, "first index")?;
            let j: usize = parse_num(toks.next(), ln, "second index")?;
            if toks.next().is_some() {
                return Err(Error::parse(ln, "trailing tokens after edge"));
            }
            let (x, y) = pair.parts();
            if i >= sizes[x.index()] || j >= sizes[y.index()] {
                return Err(Error::parse(
                    ln,
                    format!("edge {pair} {i} {j} out of range"),
                ));
            }
            edges.push((pair, i, j));
        }
    }

    let mut fwd = Pair::ALL.map(|p| {
        let (x, y) = p.parts();
        BitMatrix::new(sizes[x.index()], sizes[y.index()])
    });
    for (pair, i, j) in edges {
        fwd[pair.index()].set(i, j);
    }
    TripartiteGraph::from_forward(fwd, coords)
}

pub fn to_binary(g: &TripartiteGraph) -> Vec<u8> {
    let mut out = Vec::new();
    out.extend_from_slice(BINARY_MAGIC);
    out.extend_from_slice(&BINARY_VERSION.to_le_bytes());
    for n in g.sizes() {
        out.extend_from_slice(&(n as u64).to_le_bytes());
    }
    for part in Part::ALL {
        match g.coords(part) {
            None => out.push(0),
            Some(t) => {
                out.push(1);
                out.extend_from_slice(&(t.dim() as u64).to_le_bytes());
                for x in t.raw() {
                    out.extend_from_slice(&x.to_le_bytes());
                }
            }
        }
    }
    for pair in Pair::ALL {
        let words = g.matrix(pair).words();
        out.extend_from_slice(&(words.len() as u64).to_le_bytes());
        for w in words {
            out.extend_from_slice(&w.to_le_bytes());
        }
    }
    out
}

struct Reader<'a> {
    buf: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn err(&self, msg: impl Into<String>) -> Error {
        Error::Binary {
            offset: self.pos,
            message: msg.into(),
        }
    }

    fn take(&mut self, n: usize) -> Result<&'a [u8]> {
        if self.buf.len() - self.pos < n {
            return Err(self.err("unexpected end of input"));
        }
        let s = &self.buf[self.pos..self.pos + n];
        self.pos += n;
        Ok(s)
    }

    fn u8(&mut self) -> Result<u8> {
        Ok(self.take(1)?[0])
    }

    fn u32(&mut self) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4)?.try_into().unwrap()))
    }

    fn u64(&mut self) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8)?.try_into().unwrap()))
    }

    fn usize(&mut self) -> Result<usize> {
        let v = self.u64()?;
        usize::try_from(v).map_err(|_| self.err("size does not fit in memory"))
    }

    /// Reads a `count` that will be followed by `count * width` bytes.
    fn bounded(&mut self, count: usize, width: usize) -> Result<usize> {
        match count.checked_mul(width) {
            Some(bytes) if bytes <= self.buf.len() - self.pos => Ok(count),
            _ => Err(self.err(format!("declared length {count} exceeds remaining input"))),
        }
    }
}

pub fn from_binary(buf: &[u8]) -> Result<TripartiteGraph> {
    let mut rd = Reader { buf, pos: 0 };
    if rd.take(8)? != BINARY_MAGIC {
        return Err(Error::Binary {
            offset: 0,
            message: "bad magic".into(),
        });
    }
    let version = rd.u32()?;
    if version != BINARY_VERSION {
        return Err(rd.err(format!("unsupported version {version}")));
    }
    let sizes = [rd.usize()?, rd.usize()?, rd.usize()?];
    let mut coords: [Option<CoordTable>; 3] = [None, None, None];
    for part in Part::ALL {
        match rd.u8()? {
            0 => {}
            1 => {
                let d = rd.usize()?;
                let n = sizes[part.index()];
                let count = n
                    .checked_mul(d)
                    .ok_or_else(|| rd.err("coordinate table size overflows"))?;
                rd.bounded(count, 8)?;
                let data = (0..count)
                    .map(|_| rd.u64().map(|v| v as i64))
                    .collect::<Result<Vec<_>>>()?;
                coords[part.index()] =
                    Some(CoordTable::new(d, data).map_err(|e| rd.err(e.to_string()))?);
            }
            flag => return Err(rd.err(format!("bad coordinate flag {flag}"))),
        }
    }
    let mut mats = Vec::with_capacity(3);
    for pair in Pair::ALL {
        let (x, y) = pair.parts();
        let count = rd.usize()?;
        rd.bounded(count, 8)?;
        let words = (0..count).map(|_| rd.u64()).collect::<Result<Vec<_>>>()?;
        let m = BitMatrix::from_words(sizes[x.index()], sizes[y.index()], words)
            .ok_or_else(|| rd.err(format!("bitset for {pair} has the wrong shape")))?;
        mats.push(m);
    }
    if rd.pos != buf.len() {
        return Err(rd.err("trailing bytes"));
    }
    let fwd: [BitMatrix; 3] = mats.try_into().expect("three families");
    TripartiteGraph::from_forward(fwd, coords)
}

pub fn detect(bytes: &[u8]) -> GraphFormat {
    if bytes.starts_with(BINARY_MAGIC) {
        GraphFormat::Binary
    } else {
        GraphFormat::Text
    }
}

pub fn encode(g: &TripartiteGraph, format: GraphFormat) -> Vec<u8> {
    match format {
        GraphFormat::Text => to_text(g).into_bytes(),
        GraphFormat::Binary => to_binary(g),
    }
}

pub fn decode(bytes: &[u8]) -> Result<TripartiteGraph> {
    match detect(bytes) {
        GraphFormat::Binary => from_binary(bytes),
        GraphFormat::Text => {
            let text = std::str::from_utf8(bytes).map_err(|e| {
                let line = bytes[..e.valid_up_to()]
                    .iter()
                    .filter(|&&b| b == b'\n')
                    .count()
                    + 1;
                Error::parse(line, "input is not valid UTF-8")
            })?;
            from_text(text)
        }
    }
}

pub fn save(g: &TripartiteGraph, path: &Path, format: GraphFormat) -> Result<()> {
    fs::write(path, encode(g, format))?;
    Ok(())
}

/// Reads either encoding, chosen by the leading magic bytes.
pub fn load(path: &Path) -> Result<TripartiteGraph> {
    decode(&fs::read(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeRef;

    fn sample() -> TripartiteGraph {
        let coords = [
            Some(CoordTable::new(2, vec![1, 1, 2, 2]).unwrap()),
            Some(CoordTable::new(2, vec![1, 2]).unwrap()),
            None,
        ];
        let mut g = TripartiteGraph::new(2, 1, 70, coords).unwrap();
        for e in [
            EdgeRef::ab(1, 0),
            EdgeRef::bc(0, 69),
            EdgeRef::ac(0, 64),
            EdgeRef::ac(1, 3),
        ] {
            g.add_edge(e).unwrap();
        }
        g
    }

    #[test]
    fn empty_graph_is_header_only() {
        let g = TripartiteGraph::empty(0, 0, 0);
        let text = to_text(&g);
        assert_eq!(text, "tripartite 0 0 0\n");
        assert_eq!(from_text(&text).unwrap(), g);
        assert_eq!(from_binary(&to_binary(&g)).unwrap(), g);
    }

    #[test]
    fn text_layout() {
        let text = to_text(&sample());
        let expected = "tripartite 2 1 70\ncoords A 2\n1 1\n2 2\ncoords B 2\n1 2\nAB 1 0\nBC 0 69\nAC 0 64\nAC 1 3\n";
        assert_eq!(text, expected);
    }

    #[test]
    fn round_trips_with_partial_coordinates() {
        let g = sample();
        assert_eq!(from_text(&to_text(&g)).unwrap(), g);
        assert_eq!(from_binary(&to_binary(&g)).unwrap(), g);
        assert_eq!(decode(&encode(&g, GraphFormat::Binary)).unwrap(), g);
        assert_eq!(decode(&encode(&g, GraphFormat::Text)).unwrap(), g);
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let g = from_text("# hi\n\ntripartite 1 1 0\n\nAB 0 0\n# done\n").unwrap();
        assert!(g.has_edge(EdgeRef::ab(0, 0)).unwrap());
    }

    fn parse_line(text: &str) -> usize {
        match from_text(text).unwrap_err() {
            Error::Parse { line, .. } => line,
            other => panic!("expected parse error, got {other}"),
        }
    }

    #[test]
    fn text_errors_carry_line_numbers() {
        assert_eq!(parse_line("tripartit 1 1 1\n"), 1);
        assert_eq!(parse_line("tripartite 1 x 1\n"), 1);
        assert_eq!(parse_line(""), 1);
        assert_eq!(parse_line("tripartite 1 1 1\nAB 0 0\nAB 0 1\n"), 3);
        assert_eq!(parse_line("tripartite 1 1 1\nXY 0 0\n"), 2);
        assert_eq!(parse_line("tripartite 2 1 1\ncoords A 2\n1 1\n1\n"), 4);
        assert_eq!(
            parse_line("tripartite 1 1 1\ncoords A 1\n3\ncoords A 1\n3\n"),
            4
        );
        assert_eq!(parse_line("# c\ntripartite 1 1 1\nAB 0\n"), 3);
    }

    #[test]
    fn binary_errors() {
        let bytes = to_binary(&sample());
        assert!(matches!(
            from_binary(&bytes[..bytes.len() - 3]),
            Err(Error::Binary { .. })
        ));
        let mut bad = bytes.clone();
        bad[0] = b'X';
        assert!(matches!(
            from_binary(&bad),
            Err(Error::Binary { offset: 0, .. })
        ));
        let mut bad = bytes.clone();
        bad[8] = 9;
        assert!(from_binary(&bad).is_err());
        let mut long = bytes;
        long.push(0);
        assert!(from_binary(&long).is_err());
    }
}
