//! Differences between a golden table and the computed census, and the
//! ledger of differences already adjudicated.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrataField {
    /// The printed signature does not parse or is not a census row.
    Signature,
    Degree,
    Euler,
    GroupOrder,
    Delta,
    /// Group order and family dimension printed in each other's column.
    GroupOrderDeltaSwap,
    Covering,
    /// A census row the (complete) printed table lacks.
    MissingRow,
}

impl std::fmt::Display for ErrataField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ErrataField::Signature => "signature",
            ErrataField::Degree => "d",
            ErrataField::Euler => "e",
            ErrataField::GroupOrder => "pi1",
            ErrataField::Delta => "delta",
            ErrataField::GroupOrderDeltaSwap => "pi1/delta",
            ErrataField::Covering => "covering",
            ErrataField::MissingRow => "missing_row",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrataEntry {
    pub table_id: String,
    /// Printed row number; `None` for rows the table does not have.
    pub row_id: Option<u32>,
    pub field: ErrataField,
    pub printed_value: String,
    pub computed_value: String,
    pub justification: String,
    /// Whether the built-in ledger already accounts for this entry.
    pub known: bool,
}

/// A printed value that could not be checked either way.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ErrataNote {
    pub table_id: String,
    pub row_id: Option<u32>,
    pub field: ErrataField,
    pub printed_value: String,
    pub reason: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct ErrataReport {
    pub entries: Vec<ErrataEntry>,
    pub notes: Vec<ErrataNote>,
}

impl ErrataReport {
    pub fn unexpected(&self) -> impl Iterator<Item = &ErrataEntry> {
        self.entries.iter().filter(|e| !e.known)
    }

    pub fn keys(&self) -> Vec<(Option<u32>, ErrataField)> {
        self.entries.iter().map(|e| (e.row_id, e.field)).collect()
    }
}

/// An adjudicated difference. Matched on table, row and field; `printed` (for
/// coverings) and `computed` (for missing rows) narrow the match further.
#[derive(Debug, Clone, Copy)]
pub struct KnownErratum {
    pub table: &'static str,
    pub row: Option<u32>,
    pub field: ErrataField,
    pub printed: Option<&'static str>,
    pub computed: Option<&'static str>,
}

const fn known(table: &'static str, row: u32, field: ErrataField) -> KnownErratum {
    KnownErratum { table, row: Some(row), field, printed: None, computed: None }
}

const fn known_covering(table: &'static str, row: u32, printed: &'static str) -> KnownErratum {
    KnownErratum { table, row: Some(row), field: ErrataField::Covering, printed: Some(printed), computed: None }
}

const fn known_missing(table: &'static str, signature: &'static str) -> KnownErratum {
    KnownErratum { table, row: None, field: ErrataField::MissingRow, printed: None, computed: Some(signature) }
}

use ErrataField::*;

/// Every difference between the printed tables and the census that has been
/// confirmed by an independent route (second formula, conservation along a
/// covering edge, or direct lifting).
pub const KNOWN_ERRATA: &[KnownErratum] = &[
    known_covering("p1", 6, "[2,2,1]{6}"),
    known("k3", 10, GroupOrder),
    known_covering("k3", 9, "[2,2,2,1,1,1]{10}"),
    known("cy3", 6, Euler),
    known("cy3", 7, Euler),
    known("cy3", 8, Delta),
    known("cy3", 19, Delta),
    known("cy3", 33, Delta),
    known("cy3", 34, Delta),
    known("cy3", 24, GroupOrderDeltaSwap),
    known_covering("cy3", 9, "[1,1,3,3,3,3]{28}"),
    known_covering("cy3", 4, "[1,2,2,2,2]{12}"),
    known_covering("cy3", 20, "[1,2,2,2,2]{17}"),
    known("cy3", 10, Euler),
    known("cy3", 15, Euler),
    known("cy3", 21, Euler),
    known("cy3", 26, Euler),
    known("cy3", 32, Euler),
    known_missing("cy3", "[2_3,4_2,2,2]"),
    known_missing("cy3", "[2_2,2,2,2,2,2,2]"),
    known_missing("cy3", "[2_3,2,2,2,2,2]"),
    known_missing("cy3", "[2_3,2_2,2,2,2]"),
    known("p6", 4, Signature),
];

pub fn is_known(entry: &ErrataEntry) -> bool {
    KNOWN_ERRATA.iter().any(|k| {
        k.table == entry.table_id
            && k.row == entry.row_id
            && k.field == entry.field
            && k.printed.is_none_or(|p| p == entry.printed_value)
            && k.computed.is_none_or(|c| c == entry.computed_value)
    })
}
