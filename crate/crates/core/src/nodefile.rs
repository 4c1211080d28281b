//! Text format for the contents of one node.
//!
//! ```text
//! 3 7
//! 1 5c
//! 4 0e
//! ```
//!
//! The header is `node_id alpha`, followed by one `block_index hex_symbol`
//! line per stored symbol, block indices 1-based and ascending. Nodes of a
//! precoded code add `precoded=1 kappa=K` to the header; each symbol is then
//! K base-field coordinates written back to back, lowest coordinate first.

use std::fmt::Write as _;

use crate::design::NodeId;
use crate::error::{Error, Result};
use crate::gf::{BinaryField, Elem};
use crate::layered::NodeContents;
use crate::precoded::PrecodedNode;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeFile {
    pub node: NodeId,
    pub precoded: bool,
    pub kappa: usize,
    /// `(0-based block index, coordinates)`.
    pub symbols: Vec<(usize, Vec<Elem>)>,
}

impl NodeFile {
    pub fn from_layered(nc: &NodeContents) -> Self {
        NodeFile {
            node: nc.node,
            precoded: false,
            kappa: 1,
            symbols: nc.symbols.iter().map(|&(j, v)| (j, vec![v])).collect(),
        }
    }

    pub fn from_precoded(nc: &PrecodedNode, kappa: usize) -> Self {
        NodeFile {
            node: nc.node,
            precoded: true,
            kappa,
            symbols: nc.symbols.clone(),
        }
    }

    pub fn to_layered(&self) -> Result<NodeContents> {
        if self.precoded || self.kappa != 1 {
            return Err(Error::params(format!(
                "node {} holds precoded symbols",
                self.node
            )));
        }
        Ok(NodeContents {
            node: self.node,
            symbols: self.symbols.iter().map(|(j, v)| (*j, v[0])).collect(),
        })
    }

    pub fn to_precoded(&self) -> PrecodedNode {
        PrecodedNode {
            node: self.node,
            symbols: self.symbols.clone(),
        }
    }

    pub fn render(&self, field: &BinaryField) -> String {
        let digits = field.hex_digits();
        let mut s = format!("{} {}", self.node, self.symbols.len());
        if self.precoded {
            let _ = write!(s, " precoded=1 kappa={}", self.kappa);
        }
        s.push('\n');
        for (j, coords) in &self.symbols {
            let _ = write!(s, "{} ", j + 1);
            for c in coords {
                let _ = write!(s, "{:0digits$x}", c.0);
            }
            s.push('\n');
        }
        s
    }

    pub fn parse(text: &str, field: &BinaryField) -> Result<Self> {
        let perr = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| perr(1, "missing header".into()))?;
        let fields: Vec<&str> = header.split_whitespace().collect();
        if fields.len() < 2 {
            return Err(perr(1, "header must start with `node_id alpha`".into()));
        }
        let node: NodeId = fields[0]
            .parse()
            .map_err(|_| perr(1, format!("bad node id {:?}", fields[0])))?;
        let alpha: usize = fields[1]
            .parse()
            .map_err(|_| perr(1, format!("bad alpha {:?}", fields[1])))?;
        let mut precoded = false;
        let mut kappa = 1usize;
        for flag in &fields[2..] {
            match flag.split_once('=') {
                Some(("precoded", v)) => precoded = v == "1",
                Some(("kappa", v)) => {
                    kappa = v
                        .parse()
                        .ok()
                        .filter(|&k| k >= 1)
                        .ok_or_else(|| perr(1, format!("bad kappa {v:?}")))?;
                }
                _ => return Err(perr(1, format!("unknown header field {flag:?}"))),
            }
        }
        if !precoded && kappa != 1 {
            return Err(perr(1, "kappa > 1 requires precoded=1".into()));
        }

        let digits = field.hex_digits();
        let mut symbols: Vec<(usize, Vec<Elem>)> = Vec::with_capacity(alpha);
        for (idx, line) in lines {
            let lineno = idx + 1;
            let (b, hex) = line
                .trim()
                .split_once(' ')
                .ok_or_else(|| perr(lineno, "expected `block_index hex_symbol`".into()))?;
            let block: usize = b
                .parse()
                .ok()
                .filter(|&b| b >= 1)
                .ok_or_else(|| perr(lineno, format!("bad block index {b:?}")))?;
            if symbols.last().is_some_and(|(prev, _)| *prev + 1 >= block) {
                return Err(perr(lineno, "block indices must be strictly ascending".into()));
            }
            let hex = hex.trim();
            if hex.len() != kappa * digits || !hex.is_ascii() {
                return Err(perr(
                    lineno,
                    format!("symbol must be {} hex digits", kappa * digits),
                ));
            }
            let coords = (0..kappa)
                .map(|c| {
                    let chunk = &hex[c * digits..(c + 1) * digits];
                    u16::from_str_radix(chunk, 16)
                        .ok()
                        .map(Elem)
                        .filter(|&v| field.contains(v))
                        .ok_or_else(|| perr(lineno, format!("bad symbol {chunk:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            symbols.push((block - 1, coords));
        }
        if symbols.len() != alpha {
            return Err(perr(
                1,
                format!("header says {alpha} symbols, found {}", symbols.len()),
            ));
        }
        Ok(NodeFile {
            node,
            precoded,
            kappa,
            symbols,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layered_round_trip() {
        let f = BinaryField::default();
        let nc = NodeContents {
            node: 3,
            symbols: vec![(0, Elem(0x5c)), (3, Elem(0x0e))],
        };
        let file = NodeFile::from_layered(&nc);
        let text = file.render(&f);
        assert_eq!(text, "3 2\n1 5c\n4 0e\n");
        let back = NodeFile::parse(&text, &f).unwrap();
        assert_eq!(back.to_layered().unwrap(), nc);
    }

    #[test]
    fn precoded_round_trip() {
        let f = BinaryField::default();
        let nc = PrecodedNode {
            node: 1,
            symbols: vec![(1, vec![Elem(1), Elem(0xab), Elem(0)])],
        };
        let file = NodeFile::from_precoded(&nc, 3);
        let text = file.render(&f);
        assert_eq!(text, "1 1 precoded=1 kappa=3\n2 01ab00\n");
        let back = NodeFile::parse(&text, &f).unwrap();
        assert_eq!(back, file);
        assert!(back.to_layered().is_err());
    }

    #[test]
    fn wide_fields_use_more_digits() {
        let f = BinaryField::new(12).unwrap();
        let file = NodeFile::from_layered(&NodeContents {
            node: 2,
            symbols: vec![(0, Elem(0xfff))],
        });
        assert_eq!(file.render(&f), "2 1\n1 fff\n");
    }

    #[test]
    fn malformed_inputs() {
        let f = BinaryField::default();
        for bad in [
            "",
            "x 1\n1 00\n",
            "1 2\n1 00\n",
            "1 1\n1 0\n",
            "1 1\n0 00\n",
            "1 2\n2 00\n1 00\n",
            "1 1\n1 zz\n",
            "1 1 kappa=2\n1 0000\n",
            "1 1 color=red\n1 00\n",
        ] {
            assert!(NodeFile::parse(bad, &f).is_err(), "{bad:?}");
        }
        let gf4 = BinaryField::new(2).unwrap();
        assert!(NodeFile::parse("1 1\n1 7\n", &gf4).is_err());
    }
}
