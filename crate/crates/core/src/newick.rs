//! Newick reading and writing with exact rational branch lengths.
//!
//! Accepted lengths are integers, decimals, or `p/q` fractions; every branch
//! must carry one. Leaf names are the integers `1..n`; internal node names
//! are skipped. Output lengths use exact decimals whenever the reduced
//! denominator divides a power of ten, and `p/q` otherwise.

use crate::error::Error;
use crate::rational::{format_exact, parse_number, Rational};
use crate::tree::{NodeId, WeightedTree};
use num_traits::Zero;

/// Parses a Newick string into an unrooted weighted tree. The serialization
/// root becomes an ordinary node, so a two-child top node stays degree 2.
pub fn parse_newick(text: &str) -> Result<WeightedTree, Error> {
    let mut parser = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        num_nodes: 0,
        edges: Vec::new(),
        labels: Vec::new(),
    };
    parser.skip_ws();
    let _root = parser.subtree()?;
    parser.skip_ws();
    parser.expect(b';')?;
    parser.skip_ws();
    if parser.pos != parser.bytes.len() {
        return Err(parser.syntax("trailing characters after ';'"));
    }
    WeightedTree::from_edges(parser.num_nodes, parser.edges, parser.labels)
}

/// Serializes a tree, reading it off from the internal node next to leaf 1.
///
/// The one tree Newick cannot express verbatim, a single edge joining two
/// leaves, is written as a balanced split `(1:h,2:h);`; parsing it back
/// yields the same metric through a degree-2 node.
pub fn to_newick(tree: &WeightedTree) -> String {
    if tree.num_nodes() == 2 {
        let half = &tree.edges()[0].length / Rational::from_integer(2.into());
        let half = format_exact(&half);
        return format!("(1:{half},2:{half});");
    }
    let leaf = tree.leaf_node(1).expect("trees always have leaf 1");
    let root = tree.neighbors(leaf)[0].0;
    let mut out = String::new();
    write_node(tree, root, None, &mut out);
    out.push(';');
    out
}

fn write_node(tree: &WeightedTree, node: NodeId, from: Option<NodeId>, out: &mut String) {
    if let Some(label) = tree.node_label(node) {
        out.push_str(&label.to_string());
        return;
    }
    out.push('(');
    let mut first = true;
    for &(next, edge) in tree.neighbors(node) {
        if Some(next) == from {
            continue;
        }
        if !first {
            out.push(',');
        }
        first = false;
        write_node(tree, next, Some(node), out);
        out.push(':');
        out.push_str(&format_exact(&tree.edges()[edge].length));
    }
    out.push(')');
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    num_nodes: usize,
    edges: Vec<(NodeId, NodeId, Rational)>,
    labels: Vec<(u32, NodeId)>,
}

impl Parser<'_> {
    fn syntax(&self, message: &str) -> Error {
        Error::NewickSyntax {
            position: self.pos,
            message: message.into(),
        }
    }

    fn peek(&self) -> Option<u8> {
        self.bytes.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while matches!(self.peek(), Some(b) if b.is_ascii_whitespace()) {
            self.pos += 1;
        }
    }

    fn expect(&mut self, byte: u8) -> Result<(), Error> {
        if self.peek() == Some(byte) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.syntax(&format!("expected {:?}", byte as char)))
        }
    }

    fn new_node(&mut self) -> NodeId {
        self.num_nodes += 1;
        self.num_nodes - 1
    }

    fn subtree(&mut self) -> Result<NodeId, Error> {
        self.skip_ws();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            let node = self.new_node();
            loop {
                self.branch(node)?;
                self.skip_ws();
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.syntax("expected ',' or ')'")),
                }
            }
            // Internal node names carry no information here; drop them.
            while matches!(self.peek(), Some(b) if !b":,();".contains(&b) && !b.is_ascii_whitespace())
            {
                self.pos += 1;
            }
            Ok(node)
        } else {
            self.leaf()
        }
    }

    fn leaf(&mut self) -> Result<NodeId, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if !b":,();".contains(&b) && !b.is_ascii_whitespace())
        {
            self.pos += 1;
        }
        let name = std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("slice boundaries fall on delimiters")
            .to_string();
        if name.is_empty() {
            return Err(self.syntax("expected a leaf name"));
        }
        let label: u32 = match name.parse() {
            Ok(label) if label > 0 => label,
            _ => {
                return Err(Error::LeafName {
                    position: start,
                    name,
                })
            }
        };
        if self.labels.iter().any(|&(seen, _)| seen == label) {
            return Err(Error::DuplicateLeaf(label));
        }
        let node = self.new_node();
        self.labels.push((label, node));
        Ok(node)
    }

    fn branch(&mut self, parent: NodeId) -> Result<(), Error> {
        let child = self.subtree()?;
        self.skip_ws();
        if self.peek() != Some(b':') {
            return Err(self.syntax("expected ':' (every branch needs a length)"));
        }
        self.pos += 1;
        self.skip_ws();
        let length = self.length()?;
        self.edges.push((parent, child, length));
        Ok(())
    }

    fn length(&mut self) -> Result<Rational, Error> {
        let start = self.pos;
        while matches!(self.peek(), Some(b) if b.is_ascii_digit() || b"./-+".contains(&b)) {
            self.pos += 1;
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).expect("ascii slice");
        let value = parse_number(text).ok_or_else(|| Error::NewickSyntax {
            position: start,
            message: format!("cannot read {text:?} as a branch length"),
        })?;
        if value < Rational::zero() {
            return Err(Error::NegativeLength(start));
        }
        Ok(value)
    }
}
