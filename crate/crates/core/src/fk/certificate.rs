//! Compact refutation certificates: the move sequence of one root-to-leaf
//! path of the duality search, encoded so that its length is polylogarithmic
//! in the search volume.

use thiserror::Error;

/// One move of the search path: `A` descends to the distinguished child of
/// a low-frequency rule, `B(j)` to its `j`-th sibling (1-based), and `C(b)`
/// picks a branch where both frequencies are high.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MoveLabel {
    A,
    B(u64),
    C(bool),
}

/// A maximal run of the path between two `B` moves: how many `A` moves it
/// contains and, in order, the branch bits of its `C` moves. The exact
/// interleaving is not stored; replay reconstructs it because every node's
/// rule dictates which kind of move comes next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AcBlock {
    pub a_count: u64,
    pub choices: Vec<bool>,
}

impl AcBlock {
    fn empty() -> Self {
        AcBlock { a_count: 0, choices: Vec::new() }
    }

    fn bits(&self) -> u64 {
        let a_bits = (64 - self.a_count.leading_zeros() as u64).max(1);
        a_bits + self.choices.len() as u64
    }
}

/// A root-to-leaf path grouped into ac-blocks separated by `B` labels,
/// together with the root search volume the label widths are measured
/// against.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub root_volume: u64,
    pub lead: AcBlock,
    pub rest: Vec<(u64, AcBlock)>,
}

impl Certificate {
    /// Group a move sequence into blocks.
    pub fn from_path(root_volume: u64, path: &[MoveLabel]) -> Certificate {
        let mut lead = AcBlock::empty();
        let mut rest: Vec<(u64, AcBlock)> = Vec::new();
        for &m in path {
            let cur = rest.last_mut().map(|(_, b)| b).unwrap_or(&mut lead);
            match m {
                MoveLabel::A => cur.a_count += 1,
                MoveLabel::C(b) => cur.choices.push(b),
                MoveLabel::B(j) => rest.push((j, AcBlock::empty())),
            }
        }
        Certificate { root_volume, lead, rest }
    }

    /// Encoded size in bits: each block costs the binary length of its `A`
    /// count (at least one bit) plus one bit per branch choice, and each
    /// `B` label costs `ceil(log2 root_volume)` bits.
    pub fn bit_length(&self) -> u64 {
        let j_width = ceil_log2(self.root_volume.max(2));
        self.lead.bits()
            + self
                .rest
                .iter()
                .map(|(_, b)| j_width + b.bits())
                .sum::<u64>()
    }

    /// Line-oriented wire form; see `parse_certificate`.
    pub fn to_text(&self) -> String {
        let mut out = format!("V:{}\n", self.root_volume);
        let block = |out: &mut String, b: &AcBlock| {
            out.push_str(&format!("A:{}\n", b.a_count));
            out.push_str("G:");
            for &c in &b.choices {
                out.push(if c { '1' } else { '0' });
            }
            out.push('\n');
        };
        block(&mut out, &self.lead);
        for (j, b) in &self.rest {
            out.push_str(&format!("B:{j}\n"));
            block(&mut out, b);
        }
        out
    }
}

fn ceil_log2(x: u64) -> u64 {
    debug_assert!(x >= 2);
    64 - (x - 1).leading_zeros() as u64
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("certificate line {line}: {msg}")]
pub struct CertParseError {
    pub line: usize,
    pub msg: String,
}

/// Parse the wire form: a `V:<root-volume>` line, then blocks of
/// `A:<count>` and `G:<branch bits>` lines, separated by `B:<label>` lines.
/// `#` starts a comment line.
pub fn parse_certificate(text: &str) -> Result<Certificate, CertParseError> {
    fn target<'b>(lead: &'b mut AcBlock, rest: &'b mut Vec<(u64, AcBlock)>) -> &'b mut AcBlock {
        match rest.last_mut() {
            Some((_, b)) => b,
            None => lead,
        }
    }
    let fail = |line: usize, msg: &str| CertParseError { line, msg: msg.to_string() };
    let mut root_volume = 0u64;
    let mut lead = AcBlock::empty();
    let mut rest: Vec<(u64, AcBlock)> = Vec::new();
    // 0: want V, 1: want A, 2: want G, 3: want B or end of input
    let mut state = 0u8;
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let s = raw.trim();
        if s.is_empty() || s.starts_with('#') {
            continue;
        }
        let Some((tag, value)) = s.split_once(':') else {
            return Err(fail(line, "expected <tag>:<value>"));
        };
        match (tag, state) {
            ("V", 0) => {
                root_volume = value.parse().map_err(|_| fail(line, "bad volume"))?;
                state = 1;
            }
            ("A", 1) => {
                target(&mut lead, &mut rest).a_count =
                    value.parse().map_err(|_| fail(line, "bad move count"))?;
                state = 2;
            }
            ("G", 2) => {
                let mut choices = Vec::with_capacity(value.len());
                for ch in value.chars() {
                    match ch {
                        '0' => choices.push(false),
                        '1' => choices.push(true),
                        _ => return Err(fail(line, "branch bits must be 0 or 1")),
                    }
                }
                target(&mut lead, &mut rest).choices = choices;
                state = 3;
            }
            ("B", 3) => {
                let j: u64 = value.parse().map_err(|_| fail(line, "bad child label"))?;
                if j == 0 {
                    return Err(fail(line, "child labels are numbered from 1"));
                }
                rest.push((j, AcBlock::empty()));
                state = 1;
            }
            _ => return Err(fail(line, "tag out of order")),
        }
    }
    if state != 3 {
        return Err(CertParseError { line: 0, msg: "certificate is truncated".into() });
    }
    Ok(Certificate { root_volume, lead, rest })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grouping_from_a_path() {
        let path = [
            MoveLabel::A,
            MoveLabel::A,
            MoveLabel::C(true),
            MoveLabel::B(3),
            MoveLabel::A,
            MoveLabel::C(false),
            MoveLabel::C(true),
        ];
        let cert = Certificate::from_path(12, &path);
        assert_eq!(cert.lead, AcBlock { a_count: 2, choices: vec![true] });
        assert_eq!(cert.rest.len(), 1);
        assert_eq!(cert.rest[0].0, 3);
        assert_eq!(cert.rest[0].1, AcBlock { a_count: 1, choices: vec![false, true] });
        // lead: 2 bits for "2" + 1 choice; rest: 4-bit label (v* = 12),
        // 1 bit for "1", 2 choices
        assert_eq!(cert.bit_length(), 3 + 4 + 3);
    }

    #[test]
    fn empty_path_is_one_block() {
        let cert = Certificate::from_path(1, &[]);
        assert_eq!(cert.lead, AcBlock { a_count: 0, choices: vec![] });
        assert!(cert.rest.is_empty());
        assert_eq!(cert.bit_length(), 1); // the zero count still takes a bit
    }

    #[test]
    fn text_roundtrip() {
        let path = [
            MoveLabel::C(false),
            MoveLabel::B(1),
            MoveLabel::B(7),
            MoveLabel::A,
        ];
        let cert = Certificate::from_path(40, &path);
        let text = cert.to_text();
        assert_eq!(parse_certificate(&text).unwrap(), cert);
        let commented = format!("# certificate\n\n{text}\n# end\n");
        assert_eq!(parse_certificate(&commented).unwrap(), cert);
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert_eq!(parse_certificate("A:1\n").unwrap_err().line, 1);
        assert_eq!(parse_certificate("V:x\n").unwrap_err().line, 1);
        assert_eq!(parse_certificate("V:4\nA:1\nG:2\n").unwrap_err().line, 3);
        assert_eq!(parse_certificate("V:4\nA:1\nG:\nB:0\n").unwrap_err().line, 4);
        // truncation is reported even without a bad line
        assert_eq!(parse_certificate("V:4\nA:1\n").unwrap_err().line, 0);
        assert_eq!(parse_certificate("").unwrap_err().line, 0);
    }
}
