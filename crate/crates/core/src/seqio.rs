//! Sequences, alphabets and (aligned) FASTA I/O.
//!
//! Input is case-folded to uppercase. The gap symbol is always `-`, and
//! written records are wrapped at 80 columns.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub const GAP: u8 = b'-';
const LINE_WIDTH: usize = 80;

const DNA_SYMBOLS: &[u8] = b"ACGT";
const PROTEIN_SYMBOLS: &[u8] = b"ARNDCQEGHILKMFPSTWYV";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Alphabet {
    Dna,
    Protein,
}

impl Alphabet {
    /// Residue symbols in canonical order. Never contains the gap symbol.
    pub fn symbols(self) -> &'static [u8] {
        match self {
            Alphabet::Dna => DNA_SYMBOLS,
            Alphabet::Protein => PROTEIN_SYMBOLS,
        }
    }

    pub fn contains(self, residue: u8) -> bool {
        self.symbols().contains(&residue)
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dna" => Ok(Alphabet::Dna),
            "protein" => Ok(Alphabet::Protein),
            other => Err(Error::InvalidParameter(format!("unknown alphabet '{other}'"))),
        }
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Alphabet::Dna => "dna",
            Alphabet::Protein => "protein",
        })
    }
}

/// A named residue string over an [`Alphabet`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sequence {
    id: String,
    residues: Vec<u8>,
    alphabet: Alphabet,
}

impl Sequence {
    /// Builds a sequence, uppercasing residues and rejecting symbols outside
    /// the alphabet.
    pub fn new(id: impl Into<String>, residues: impl AsRef<[u8]>, alphabet: Alphabet) -> Result<Self> {
        let residues: Vec<u8> = residues.as_ref().iter().map(u8::to_ascii_uppercase).collect();
        if let Some(&bad) = residues.iter().find(|&&r| !alphabet.contains(r)) {
            return Err(Error::IllegalCharacter {
                line: 0,
                ch: bad as char,
            });
        }
        Ok(Sequence {
            id: id.into(),
            residues,
            alphabet,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn residues(&self) -> &[u8] {
        &self.residues
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn len(&self) -> usize {
        self.residues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.residues.is_empty()
    }
}

/// Rows of an alignment: equal-length strings over the alphabet plus `-`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Msa {
    ids: Vec<String>,
    rows: Vec<Vec<u8>>,
    homologous_columns: Option<BTreeSet<usize>>,
}

impl Msa {
    /// Rows are uppercased. Fails when rows differ in length or the id count
    /// does not match the row count.
    pub fn new(ids: Vec<String>, rows: Vec<Vec<u8>>) -> Result<Self> {
        if ids.len() != rows.len() {
            return Err(Error::InvalidParameter(format!(
                "{} ids for {} rows",
                ids.len(),
                rows.len()
            )));
        }
        let rows: Vec<Vec<u8>> = rows
            .into_iter()
            .map(|r| r.into_iter().map(|b| b.to_ascii_uppercase()).collect())
            .collect();
        if let Some(first) = rows.first() {
            let width = first.len();
            for (id, row) in ids.iter().zip(&rows) {
                if row.len() != width {
                    return Err(Error::RaggedAlignment {
                        id: id.clone(),
                        expected: width,
                        found: row.len(),
                    });
                }
            }
        }
        Ok(Msa {
            ids,
            rows,
            homologous_columns: None,
        })
    }

    /// Attaches a set of 0-based homologous column indices.
    pub fn with_homologous_columns(mut self, columns: BTreeSet<usize>) -> Result<Self> {
        if let Some(&c) = columns.iter().next_back() {
            if c >= self.width() {
                return Err(Error::OutOfRange {
                    what: "column",
                    index: c + 1,
                    max: self.width(),
                });
            }
        }
        self.homologous_columns = Some(columns);
        Ok(self)
    }

    pub fn homologous_columns(&self) -> Option<&BTreeSet<usize>> {
        self.homologous_columns.as_ref()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn rows(&self) -> &[Vec<u8>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[u8] {
        &self.rows[i]
    }

    pub fn num_rows(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns.
    pub fn width(&self) -> usize {
        self.rows.first().map_or(0, Vec::len)
    }

    /// Row `i` with gaps removed.
    pub fn ungapped(&self, i: usize) -> Vec<u8> {
        self.rows[i].iter().copied().filter(|&b| b != GAP).collect()
    }

    /// Gap-stripped rows as sequences.
    pub fn sequences(&self, alphabet: Alphabet) -> Result<Vec<Sequence>> {
        (0..self.num_rows())
            .map(|i| Sequence::new(self.ids[i].clone(), self.ungapped(i), alphabet))
            .collect()
    }
}

struct Record {
    id: String,
    data: Vec<u8>,
}

fn parse_records(text: &str, alphabet: Alphabet, allow_gaps: bool) -> Result<Vec<Record>> {
    let mut records: Vec<Record> = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let lineno = idx + 1;
        if let Some(header) = line.strip_prefix('>') {
            let id = header
                .split_whitespace()
                .next()
                .ok_or(Error::MalformedHeader { line: lineno })?;
            if let Some(prev) = records.last() {
                if prev.data.is_empty() {
                    return Err(Error::EmptyRecord { id: prev.id.clone() });
                }
            }
            records.push(Record {
                id: id.to_string(),
                data: Vec::new(),
            });
            continue;
        }
        let mut chars = line.chars().filter(|c| !c.is_whitespace()).peekable();
        if chars.peek().is_none() {
            continue;
        }
        let record = records.last_mut().ok_or(Error::MissingHeader { line: lineno })?;
        for ch in chars {
            let up = ch.to_ascii_uppercase();
            match u8::try_from(up) {
                Ok(b) if alphabet.contains(b) || (allow_gaps && b == GAP) => record.data.push(b),
                _ => return Err(Error::IllegalCharacter { line: lineno, ch }),
            }
        }
    }
    if let Some(last) = records.last() {
        if last.data.is_empty() {
            return Err(Error::EmptyRecord { id: last.id.clone() });
        }
    }
    Ok(records)
}

/// Parses FASTA text into sequences, preserving record order.
pub fn read_fasta(text: &str, alphabet: Alphabet) -> Result<Vec<Sequence>> {
    parse_records(text, alphabet, false)?
        .into_iter()
        .map(|r| {
            Ok(Sequence {
                id: r.id,
                residues: r.data,
                alphabet,
            })
        })
        .collect()
}

/// Parses gapped FASTA into an alignment. Rows must all have one width.
pub fn read_aligned_fasta(text: &str, alphabet: Alphabet) -> Result<Msa> {
    let records = parse_records(text, alphabet, true)?;
    if records.is_empty() {
        return Err(Error::EmptyAlignment);
    }
    let (ids, rows) = records.into_iter().map(|r| (r.id, r.data)).unzip();
    Msa::new(ids, rows)
}

fn write_record(out: &mut String, id: &str, data: &[u8]) {
    out.push('>');
    out.push_str(id);
    out.push('\n');
    for chunk in data.chunks(LINE_WIDTH) {
        // data is ASCII by construction
        out.push_str(std::str::from_utf8(chunk).expect("ascii residues"));
        out.push('\n');
    }
}

pub fn write_fasta(sequences: &[Sequence]) -> String {
    let mut out = String::new();
    for s in sequences {
        write_record(&mut out, &s.id, &s.residues);
    }
    out
}

pub fn write_aligned_fasta(msa: &Msa) -> Result<String> {
    if msa.num_rows() == 0 {
        return Err(Error::EmptyAlignment);
    }
    let mut out = String::new();
    for (id, row) in msa.ids.iter().zip(&msa.rows) {
        write_record(&mut out, id, row);
    }
    Ok(out)
}
