//! Line-oriented text formats for instances, witnesses and trees. All
//! fractions are exact `p/q` strings; parse errors carry 1-based line
//! numbers.

use crate::comm::protocol::ProtocolTree;
use crate::error::{input_err, Result};
use crate::instances::Instance;
use crate::model::{
    Assignment, BoundKind, CommInstance, QueryInstance, Rectangle, Region, Side, Witness,
};
use crate::query::dtree::QueryTree;
use crate::rat::{fmt_rat, parse_rat};

fn fail<T>(line: usize, msg: impl AsRef<str>) -> Result<T> {
    input_err(format!("line {line}: {}", msg.as_ref()))
}

/// Parses either instance flavor, dispatching on the first line's tag.
pub fn parse_instance(text: &str) -> Result<Instance> {
    match text.lines().next().map(str::trim) {
        Some("COMM v1") => Ok(Instance::Comm(parse_comm_instance(text)?)),
        Some("QUERY v1") => Ok(Instance::Query(parse_query_instance(text)?)),
        _ => fail(1, "expected a `COMM v1` or `QUERY v1` header"),
    }
}

pub fn serialize_instance(instance: &Instance) -> String {
    match instance {
        Instance::Comm(c) => serialize_comm_instance(c),
        Instance::Query(q) => serialize_query_instance(q),
    }
}

/// One cell: an output value, `*` for undefined, or a `{a,b}` subset.
fn parse_cell(tok: &str, alphabet: u16, line: usize) -> Result<u64> {
    if tok == "*" {
        return Ok(0);
    }
    if let Some(inner) = tok.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
        let mut mask = 0u64;
        for part in inner.split(',') {
            let Ok(z) = part.trim().parse::<u16>() else {
                return fail(line, format!("bad output {:?} in subset", part.trim()));
            };
            if z >= alphabet {
                return fail(line, format!("output {z} outside the alphabet"));
            }
            mask |= 1 << z;
        }
        return Ok(mask);
    }
    let Ok(z) = tok.parse::<u16>() else {
        return fail(line, format!("unrecognized cell token {tok:?}"));
    };
    if z >= alphabet {
        return fail(line, format!("output {z} outside the alphabet"));
    }
    Ok(1 << z)
}

fn write_cell(mask: u64, relation: bool) -> String {
    if relation {
        let members: Vec<String> = (0..64)
            .filter(|z| mask >> z & 1 == 1)
            .map(|z| z.to_string())
            .collect();
        format!("{{{}}}", members.join(","))
    } else if mask == 0 {
        "*".to_string()
    } else {
        mask.trailing_zeros().to_string()
    }
}

/// Header fields come as `key value` pairs; this demands one exact keyword.
fn keyed<'a>(
    tokens: &mut impl Iterator<Item = &'a str>,
    key: &str,
    line: usize,
) -> Result<&'a str> {
    match (tokens.next(), tokens.next()) {
        (Some(k), Some(v)) if k == key => Ok(v),
        _ => fail(line, format!("expected `{key} <value>`")),
    }
}

pub fn parse_comm_instance(text: &str) -> Result<CommInstance> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first().map(|l| l.trim()) != Some("COMM v1") {
        return fail(1, "expected `COMM v1`");
    }
    let Some(header) = lines.get(1) else {
        return fail(2, "missing size header");
    };
    let mut toks = header.split_whitespace();
    let rows = keyed(&mut toks, "rows", 2)?;
    let cols = keyed(&mut toks, "cols", 2)?;
    let alpha = keyed(&mut toks, "alphabet", 2)?;
    let relation = match toks.next() {
        None => false,
        Some("relation") => true,
        Some(other) => return fail(2, format!("unexpected token {other:?}")),
    };
    let (Ok(nrows), Ok(ncols), Ok(alphabet)) = (
        rows.parse::<usize>(),
        cols.parse::<usize>(),
        alpha.parse::<u16>(),
    ) else {
        return fail(2, "sizes must be unsigned integers");
    };
    if nrows == 0 || ncols == 0 || alphabet == 0 || alphabet > 64 {
        return fail(
            2,
            "rows and cols must be positive and the alphabet within 1..=64",
        );
    }

    let mut cells = Vec::with_capacity(nrows * ncols);
    for r in 0..nrows {
        let line_no = 3 + r;
        let Some(row) = lines.get(2 + r) else {
            return fail(line_no, format!("missing row {r}"));
        };
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != ncols {
            return fail(
                line_no,
                format!("expected {ncols} cells, got {}", toks.len()),
            );
        }
        for tok in toks {
            cells.push(parse_cell(tok, alphabet, line_no)?);
        }
    }
    for (i, rest) in lines.iter().enumerate().skip(2 + nrows) {
        if !rest.trim().is_empty() {
            return fail(i + 1, "unexpected trailing content");
        }
    }
    CommInstance::new(nrows, ncols, alphabet, relation, cells)
}

pub fn serialize_comm_instance(instance: &CommInstance) -> String {
    let mut out = String::from("COMM v1\n");
    out.push_str(&format!(
        "rows {} cols {} alphabet {}{}\n",
        instance.nrows(),
        instance.ncols(),
        instance.alphabet(),
        if instance.is_relation() {
            " relation"
        } else {
            ""
        }
    ));
    for x in 0..instance.nrows() {
        let row: Vec<String> = (0..instance.ncols())
            .map(|y| write_cell(instance.cell_mask(x, y), instance.is_relation()))
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

pub fn parse_query_instance(text: &str) -> Result<QueryInstance> {
    let lines: Vec<&str> = text.lines().collect();
    if lines.first().map(|l| l.trim()) != Some("QUERY v1") {
        return fail(1, "expected `QUERY v1`");
    }
    let Some(header) = lines.get(1) else {
        return fail(2, "missing size header");
    };
    let mut toks = header.split_whitespace();
    let n_tok = keyed(&mut toks, "n", 2)?;
    let m_tok = keyed(&mut toks, "m", 2)?;
    let relation = match toks.next() {
        None => false,
        Some("relation") => true,
        Some(other) => return fail(2, format!("unexpected token {other:?}")),
    };
    let (Ok(n), Ok(m)) = (n_tok.parse::<usize>(), m_tok.parse::<usize>()) else {
        return fail(2, "sizes must be unsigned integers");
    };
    if n == 0 || n > 20 || m == 0 || m > 6 {
        return fail(2, "n must be within 1..=20 and m within 1..=6");
    }
    let alphabet = 1u16 << m;

    let count = 1usize << n;
    let mut table = Vec::with_capacity(count);
    for x in 0..count {
        let line_no = 3 + x;
        let Some(row) = lines.get(2 + x) else {
            return fail(line_no, format!("missing entry for input {x}"));
        };
        let toks: Vec<&str> = row.split_whitespace().collect();
        if toks.len() != 1 {
            return fail(line_no, "expected exactly one token per input");
        }
        table.push(parse_cell(toks[0], alphabet, line_no)?);
    }
    for (i, rest) in lines.iter().enumerate().skip(2 + count) {
        if !rest.trim().is_empty() {
            return fail(i + 1, "unexpected trailing content");
        }
    }
    QueryInstance::new(n, m, relation, table)
}

pub fn serialize_query_instance(instance: &QueryInstance) -> String {
    let mut out = String::from("QUERY v1\n");
    out.push_str(&format!(
        "n {} m {}{}\n",
        instance.n(),
        instance.m(),
        if instance.is_relation() {
            " relation"
        } else {
            ""
        }
    ));
    for x in 0..instance.input_count() as u32 {
        out.push_str(&write_cell(instance.cell_mask(x), instance.is_relation()));
        out.push('\n');
    }
    out
}

pub fn parse_witness(text: &str) -> Result<Witness> {
    let mut lines = text.lines().enumerate();
    let Some((_, header)) = lines.next() else {
        return fail(1, "empty witness file");
    };
    let toks: Vec<&str> = header.split_whitespace().collect();
    let [l, r] = ["WITNESS", "v1"];
    if toks.len() != 6 || toks[0] != l || toks[1] != r || toks[4] != "eps" {
        return fail(1, "expected `WITNESS v1 <primal|dual> <kind> eps <p/q>`");
    }
    let side = match toks[2] {
        "primal" => Side::Primal,
        "dual" => Side::Dual,
        other => return fail(1, format!("unknown side {other:?}")),
    };
    let kind = BoundKind::from_token(toks[3])?;
    let Ok(epsilon) = parse_rat(toks[5]) else {
        return fail(1, format!("bad fraction {:?}", toks[5]));
    };
    let mut witness = match side {
        Side::Primal => Witness::primal(kind.token(), epsilon),
        Side::Dual => Witness::dual(kind.token(), epsilon),
    };

    for (i, line) in lines {
        let line_no = i + 1;
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        match (toks[0], side) {
            ("RECT", Side::Primal) | ("ASGN", Side::Primal) => {
                if toks.len() != 5 {
                    return fail(line_no, "expected `<tag> <hex> <hex> <z> <p/q>`");
                }
                let (Ok(a), Ok(b)) = (
                    u64::from_str_radix(toks[1], 16),
                    u64::from_str_radix(toks[2], 16),
                ) else {
                    return fail(line_no, "masks must be hex");
                };
                let Ok(z) = toks[3].parse::<u16>() else {
                    return fail(line_no, format!("bad output {:?}", toks[3]));
                };
                let Ok(w) = parse_rat(toks[4]) else {
                    return fail(line_no, format!("bad fraction {:?}", toks[4]));
                };
                let region = if toks[0] == "RECT" {
                    Region::Rect(Rectangle::new(a, b)?)
                } else {
                    let (Ok(fixed), Ok(values)) = (u32::try_from(a), u32::try_from(b)) else {
                        return fail(line_no, "assignment masks must fit 32 bits");
                    };
                    Region::Assign(Assignment::new(fixed, values)?)
                };
                if witness.regions.insert((z, region), w).is_some() {
                    return fail(line_no, "duplicate region entry");
                }
            }
            ("MU", Side::Dual) | ("PHI", Side::Dual) => {
                if toks.len() != 3 {
                    return fail(line_no, "expected `<tag> <index> <p/q>`");
                }
                let Ok(idx) = toks[1].parse::<usize>() else {
                    return fail(line_no, format!("bad index {:?}", toks[1]));
                };
                let Ok(v) = parse_rat(toks[2]) else {
                    return fail(line_no, format!("bad fraction {:?}", toks[2]));
                };
                let map = if toks[0] == "MU" {
                    &mut witness.mu
                } else {
                    &mut witness.phi
                };
                if map.insert(idx, v).is_some() {
                    return fail(line_no, "duplicate dual entry");
                }
            }
            (tag, _) => {
                return fail(
                    line_no,
                    format!(
                        "entry {tag:?} does not belong in a {} witness",
                        side.token()
                    ),
                )
            }
        }
    }
    Ok(witness)
}

pub fn serialize_witness(witness: &Witness) -> String {
    let mut out = format!(
        "WITNESS v1 {} {} eps {}\n",
        witness.side.token(),
        witness.kind,
        fmt_rat(&witness.epsilon)
    );
    for ((z, region), w) in &witness.regions {
        match region {
            Region::Rect(r) => out.push_str(&format!(
                "RECT {:x} {:x} {z} {}\n",
                r.row_mask(),
                r.col_mask(),
                fmt_rat(w)
            )),
            Region::Assign(a) => out.push_str(&format!(
                "ASGN {:x} {:x} {z} {}\n",
                a.fixed_mask(),
                a.values(),
                fmt_rat(w)
            )),
        }
    }
    for (idx, v) in &witness.mu {
        out.push_str(&format!("MU {idx} {}\n", fmt_rat(v)));
    }
    for (idx, v) in &witness.phi {
        out.push_str(&format!("PHI {idx} {}\n", fmt_rat(v)));
    }
    out
}

struct Sexp<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Sexp<'a> {
    fn new(src: &'a str) -> Self {
        Sexp { src, pos: 0 }
    }

    fn line(&self) -> usize {
        1 + self.src[..self.pos].matches('\n').count()
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src.as_bytes()[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.as_bytes().get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            fail(self.line(), format!("expected {:?}", char::from(c)))
        }
    }

    fn atom(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() {
            let b = self.src.as_bytes()[self.pos];
            if b.is_ascii_whitespace() || b == b'(' || b == b')' {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return fail(self.line(), "expected a token");
        }
        Ok(&self.src[start..self.pos])
    }

    fn keyed(&mut self, key: &str) -> Result<&'a str> {
        let line = self.line();
        let atom = self.atom()?;
        match atom.strip_prefix(key).and_then(|s| s.strip_prefix('=')) {
            Some(v) => Ok(v),
            None => fail(line, format!("expected `{key}=<value>`, got {atom:?}")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        if self.peek().is_some() {
            return fail(self.line(), "trailing content after the tree");
        }
        Ok(())
    }
}

/// Parses `(node speaker=A part=<hex> left right)` trees with
/// `(leaf z=<int>)` leaves. Speaker `A` partitions rows, `B` columns; the
/// `part` mask continues into the left subtree.
pub fn parse_protocol_tree(text: &str) -> Result<ProtocolTree> {
    let mut p = Sexp::new(text);
    let tree = protocol_node(&mut p)?;
    p.finish()?;
    Ok(tree)
}

fn protocol_node(p: &mut Sexp) -> Result<ProtocolTree> {
    p.expect(b'(')?;
    let line = p.line();
    match p.atom()? {
        "leaf" => {
            let z_tok = p.keyed("z")?;
            let Ok(z) = z_tok.parse::<u16>() else {
                return fail(line, format!("bad output {z_tok:?}"));
            };
            p.expect(b')')?;
            Ok(ProtocolTree::Leaf { z })
        }
        "node" => {
            let row_player = match p.keyed("speaker")? {
                "A" => true,
                "B" => false,
                other => return fail(line, format!("speaker must be A or B, got {other:?}")),
            };
            let part_tok = p.keyed("part")?;
            let Ok(part) = u64::from_str_radix(part_tok, 16) else {
                return fail(line, format!("part mask must be hex, got {part_tok:?}"));
            };
            let left = Box::new(protocol_node(p)?);
            let right = Box::new(protocol_node(p)?);
            p.expect(b')')?;
            Ok(ProtocolTree::Node {
                row_player,
                part,
                left,
                right,
            })
        }
        other => fail(line, format!("expected `node` or `leaf`, got {other:?}")),
    }
}

pub fn serialize_protocol_tree(tree: &ProtocolTree) -> String {
    match tree {
        ProtocolTree::Leaf { z } => format!("(leaf z={z})"),
        ProtocolTree::Node {
            row_player,
            part,
            left,
            right,
        } => format!(
            "(node speaker={} part={part:x} {} {})",
            if *row_player { "A" } else { "B" },
            serialize_protocol_tree(left),
            serialize_protocol_tree(right)
        ),
    }
}

/// Parses `(query i zero one)` trees with `(leaf z=<int>)` leaves; the
/// first subtree answers the queried bit being 0.
pub fn parse_query_tree(text: &str) -> Result<QueryTree> {
    let mut p = Sexp::new(text);
    let tree = query_node(&mut p)?;
    p.finish()?;
    Ok(tree)
}

fn query_node(p: &mut Sexp) -> Result<QueryTree> {
    p.expect(b'(')?;
    let line = p.line();
    match p.atom()? {
        "leaf" => {
            let z_tok = p.keyed("z")?;
            let Ok(z) = z_tok.parse::<u16>() else {
                return fail(line, format!("bad output {z_tok:?}"));
            };
            p.expect(b')')?;
            Ok(QueryTree::Leaf { z })
        }
        "query" => {
            let var_tok = p.atom()?;
            let Ok(var) = var_tok.parse::<u32>() else {
                return fail(line, format!("bad variable {var_tok:?}"));
            };
            let zero = Box::new(query_node(p)?);
            let one = Box::new(query_node(p)?);
            p.expect(b')')?;
            Ok(QueryTree::Node { var, zero, one })
        }
        other => fail(line, format!("expected `query` or `leaf`, got {other:?}")),
    }
}

pub fn serialize_query_tree(tree: &QueryTree) -> String {
    match tree {
        QueryTree::Leaf { z } => format!("(leaf z={z})"),
        QueryTree::Node { var, zero, one } => format!(
            "(query {var} {} {})",
            serialize_query_tree(zero),
            serialize_query_tree(one)
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::instances::standard::{make_eq, make_or};
    use crate::rat::{rat, ratio};
    use proptest::prelude::*;

    #[test]
    fn comm_files_round_trip() {
        let eq = make_eq(2).unwrap();
        assert_eq!(
            parse_comm_instance(&serialize_comm_instance(&eq)).unwrap(),
            eq
        );

        let rel = CommInstance::new(2, 2, 3, true, vec![0b11, 0b101, 0b1, 0b111]).unwrap();
        assert_eq!(
            parse_comm_instance(&serialize_comm_instance(&rel)).unwrap(),
            rel
        );
    }

    #[test]
    fn partial_cells_read_back_as_stars() {
        let partial = CommInstance::from_values(2, 2, 2, &[Some(1), None, None, Some(0)]).unwrap();
        let text = serialize_comm_instance(&partial);
        assert!(text.contains('*'));
        assert_eq!(parse_comm_instance(&text).unwrap(), partial);
    }

    #[test]
    fn query_files_round_trip() {
        let or = make_or(3).unwrap();
        assert_eq!(
            parse_query_instance(&serialize_query_instance(&or)).unwrap(),
            or
        );

        let rel = QueryInstance::new(2, 2, true, vec![0b11, 0b1010, 0b1, 0b1111]).unwrap();
        assert_eq!(
            parse_query_instance(&serialize_query_instance(&rel)).unwrap(),
            rel
        );
    }

    #[test]
    fn instance_dispatch_reads_the_header() {
        let or = make_or(2).unwrap();
        match parse_instance(&serialize_query_instance(&or)).unwrap() {
            Instance::Query(q) => assert_eq!(q, or),
            Instance::Comm(_) => panic!("dispatched to the wrong flavor"),
        }
        assert_eq!(parse_instance("BOGUS v1\n").unwrap_err().exit_code(), 2);
    }

    #[test]
    fn witness_files_round_trip() {
        let mut primal = Witness::primal(BoundKind::Prt.token(), rat(0));
        primal.regions.insert(
            (0, Region::Rect(Rectangle::new(0b11, 0b1).unwrap())),
            ratio(1, 2),
        );
        primal.regions.insert(
            (1, Region::Assign(Assignment::new(0b1, 0b1).unwrap())),
            rat(2),
        );
        assert_eq!(parse_witness(&serialize_witness(&primal)).unwrap(), primal);

        let mut dual = Witness::dual(BoundKind::QPrt.token(), ratio(1, 16));
        dual.mu.insert(0, rat(1));
        dual.mu.insert(3, ratio(1, 4));
        dual.phi.insert(0, ratio(-3, 4));
        assert_eq!(parse_witness(&serialize_witness(&dual)).unwrap(), dual);
    }

    #[test]
    fn parse_errors_carry_line_numbers() {
        let err = parse_comm_instance("COMM v1\nrows 2 cols 2 alphabet 2\n0 1\n0 7\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");

        let err = parse_comm_instance("COMM v1\nrows 2 cols 2 alphabet 2\n0 1\n").unwrap_err();
        assert!(err.to_string().contains("line 4"), "{err}");

        let err = parse_witness("WITNESS v1 dual qprt eps 0\nRECT 1 1 0 1\n").unwrap_err();
        assert!(err.to_string().contains("line 2"), "{err}");

        let err = parse_witness("WITNESS v1 dual qprt eps 0\nMU 0 1\nMU 0 1\n").unwrap_err();
        assert!(err.to_string().contains("duplicate"), "{err}");
    }

    #[test]
    fn protocol_trees_round_trip() {
        let tree = ProtocolTree::Node {
            row_player: true,
            part: 0b01,
            left: Box::new(ProtocolTree::Leaf { z: 1 }),
            right: Box::new(ProtocolTree::Node {
                row_player: false,
                part: 0b10,
                left: Box::new(ProtocolTree::Leaf { z: 0 }),
                right: Box::new(ProtocolTree::Leaf { z: 1 }),
            }),
        };
        let text = serialize_protocol_tree(&tree);
        assert_eq!(parse_protocol_tree(&text).unwrap(), tree);
        assert!(parse_protocol_tree("(node speaker=C part=1 (leaf z=0) (leaf z=1))").is_err());
    }

    #[test]
    fn query_trees_round_trip() {
        let tree = QueryTree::Node {
            var: 1,
            zero: Box::new(QueryTree::Node {
                var: 2,
                zero: Box::new(QueryTree::Leaf { z: 0 }),
                one: Box::new(QueryTree::Leaf { z: 1 }),
            }),
            one: Box::new(QueryTree::Leaf { z: 1 }),
        };
        let text = serialize_query_tree(&tree);
        assert_eq!(parse_query_tree(&text).unwrap(), tree);
        assert!(parse_query_tree(&text[..text.len() - 1]).is_err());
    }

    proptest! {
        #[test]
        fn any_comm_instance_round_trips(
            nrows in 1usize..=4,
            ncols in 1usize..=4,
            alphabet in 2u16..=4,
            relation in proptest::bool::ANY,
            seed in proptest::collection::vec(0u64..u64::MAX, 16),
        ) {
            let cells: Vec<u64> = (0..nrows * ncols)
                .map(|i| {
                    let raw = seed[i % seed.len()].wrapping_add(i as u64);
                    if relation {
                        1 + raw % ((1 << alphabet) - 1)
                    } else {
                        match raw % (u64::from(alphabet) + 1) {
                            0 => 0,
                            z => 1 << (z - 1),
                        }
                    }
                })
                .collect();
            let instance = CommInstance::new(nrows, ncols, alphabet, relation, cells).unwrap();
            prop_assert_eq!(
                parse_comm_instance(&serialize_comm_instance(&instance)).unwrap(),
                instance
            );
        }

        #[test]
        fn any_query_instance_round_trips(
            n in 1usize..=3,
            m in 1usize..=2,
            relation in proptest::bool::ANY,
            seed in proptest::collection::vec(0u64..u64::MAX, 8),
        ) {
            let alphabet = 1u64 << (1 << m);
            let table: Vec<u64> = (0..1usize << n)
                .map(|i| {
                    let raw = seed[i % seed.len()].wrapping_add(i as u64);
                    if relation {
                        1 + raw % (alphabet - 1)
                    } else {
                        match raw % ((1 << m) + 1) {
                            0 => 0,
                            z => 1 << (z - 1),
                        }
                    }
                })
                .collect();
            let instance = QueryInstance::new(n, m, relation, table).unwrap();
            prop_assert_eq!(
                parse_query_instance(&serialize_query_instance(&instance)).unwrap(),
                instance
            );
        }
    }
}
