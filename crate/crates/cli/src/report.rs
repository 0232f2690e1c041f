//! Serializable report bodies for each subcommand, with text and CSV
//! renderings.  JSON is produced by serializing the structs directly;
//! counts that can be large travel as decimal strings.

use ordeal::classes::picard::Certification;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

/// Version stamp on every JSON envelope and cache entry.
pub const SCHEMA_VERSION: &str = "1";

/// Render a certification as "exact" or "conditional(<bound>)".
pub fn cert_string(c: &Certification) -> String {
    match c {
        Certification::Exact => "exact".to_string(),
        Certification::Conditional(b) => format!("conditional({b})"),
    }
}

/// One CSV field, quoted only when it needs to be.
fn field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

fn csv_line(cells: &[String]) -> String {
    let mut out = cells.iter().map(|c| field(c)).collect::<Vec<_>>().join(",");
    out.push('\n');
    out
}

/// A subcommand's report body: serializable both ways for the cache,
/// renderable as text and CSV, and aware of conditional results.
pub trait Report: Serialize + DeserializeOwned {
    fn text(&self) -> String;
    fn csv(&self) -> String;
    /// True when any reported count rests on an unproven search bound.
    fn conditional(&self) -> bool {
        false
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TypeReport {
    pub degree: usize,
    pub discriminant: String,
    pub index_in_maximal: String,
    pub maximal: bool,
    pub global_type: usize,
    pub gorenstein: bool,
    pub nearly_gorenstein: bool,
    pub almost_gorenstein: bool,
}

impl Report for TypeReport {
    fn text(&self) -> String {
        format!(
            "degree: {}\ndiscriminant: {}\nindex_in_maximal: {}\nmaximal: {}\n\
             global_type: {}\ngorenstein: {}\nnearly_gorenstein: {}\nalmost_gorenstein: {}\n",
            self.degree,
            self.discriminant,
            self.index_in_maximal,
            self.maximal,
            self.global_type,
            self.gorenstein,
            self.nearly_gorenstein,
            self.almost_gorenstein
        )
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "degree".into(),
            "discriminant".into(),
            "index_in_maximal".into(),
            "maximal".into(),
            "global_type".into(),
            "gorenstein".into(),
            "nearly_gorenstein".into(),
            "almost_gorenstein".into(),
        ]);
        out.push_str(&csv_line(&[
            self.degree.to_string(),
            self.discriminant.clone(),
            self.index_in_maximal.clone(),
            self.maximal.to_string(),
            self.global_type.to_string(),
            self.gorenstein.to_string(),
            self.nearly_gorenstein.to_string(),
            self.almost_gorenstein.to_string(),
        ]));
        out
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PrimeRow {
    pub p: String,
    pub residue_degree: usize,
    pub dim_maximal_quotient: usize,
    pub local_type: usize,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PrimesReport {
    pub singular_primes: Vec<String>,
    pub count: String,
    pub primes: Vec<PrimeRow>,
}

impl Report for PrimesReport {
    fn text(&self) -> String {
        let mut out = format!(
            "singular_primes: {}\nnoninvertible_count: {}\n",
            self.singular_primes.join(" "),
            self.count
        );
        out.push_str("p  residue_degree  dim_maximal_quotient  local_type\n");
        for r in &self.primes {
            out.push_str(&format!(
                "{}  {}  {}  {}\n",
                r.p, r.residue_degree, r.dim_maximal_quotient, r.local_type
            ));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "p".into(),
            "residue_degree".into(),
            "dim_maximal_quotient".into(),
            "local_type".into(),
        ]);
        for r in &self.primes {
            out.push_str(&csv_line(&[
                r.p.clone(),
                r.residue_degree.to_string(),
                r.dim_maximal_quotient.to_string(),
                r.local_type.to_string(),
            ]));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct TypeCountRow {
    pub global_type: usize,
    pub orders: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct OverordersReport {
    pub count: String,
    pub gorenstein_count: String,
    pub max_type: usize,
    pub by_type: Vec<TypeCountRow>,
}

impl Report for OverordersReport {
    fn text(&self) -> String {
        let mut out = format!(
            "count: {}\ngorenstein_count: {}\nmax_type: {}\n",
            self.count, self.gorenstein_count, self.max_type
        );
        out.push_str("type  orders\n");
        for r in &self.by_type {
            out.push_str(&format!("{}  {}\n", r.global_type, r.orders));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["global_type".into(), "orders".into()]);
        for r in &self.by_type {
            out.push_str(&csv_line(&[r.global_type.to_string(), r.orders.clone()]));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct WkRow {
    pub position: usize,
    pub index_in_maximal: String,
    pub weak_classes: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct WkReport {
    pub order_count: String,
    pub total: String,
    pub orders: Vec<WkRow>,
}

impl Report for WkReport {
    fn text(&self) -> String {
        let mut out = format!("order_count: {}\ntotal: {}\n", self.order_count, self.total);
        out.push_str("position  index_in_maximal  weak_classes\n");
        for r in &self.orders {
            out.push_str(&format!(
                "{}  {}  {}\n",
                r.position, r.index_in_maximal, r.weak_classes
            ));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "position".into(),
            "index_in_maximal".into(),
            "weak_classes".into(),
        ]);
        for r in &self.orders {
            out.push_str(&csv_line(&[
                r.position.to_string(),
                r.index_in_maximal.clone(),
                r.weak_classes.clone(),
            ]));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct PicReport {
    pub pic: String,
    pub certification: String,
    pub h_maximal: String,
    pub h_certification: String,
    pub unit_generators: usize,
}

impl Report for PicReport {
    fn text(&self) -> String {
        format!(
            "pic: {}\ncertification: {}\nh_maximal: {}\nh_certification: {}\nunit_generators: {}\n",
            self.pic, self.certification, self.h_maximal, self.h_certification, self.unit_generators
        )
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "pic".into(),
            "certification".into(),
            "h_maximal".into(),
            "h_certification".into(),
            "unit_generators".into(),
        ]);
        out.push_str(&csv_line(&[
            self.pic.clone(),
            self.certification.clone(),
            self.h_maximal.clone(),
            self.h_certification.clone(),
            self.unit_generators.to_string(),
        ]));
        out
    }

    fn conditional(&self) -> bool {
        self.certification != "exact"
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct IcmRowOut {
    pub position: usize,
    pub index_in_maximal: String,
    pub weak_classes: String,
    pub pic: String,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct IcmReportOut {
    pub total: String,
    pub certification: String,
    pub order_count: String,
    pub orders: Vec<IcmRowOut>,
}

impl Report for IcmReportOut {
    fn text(&self) -> String {
        let mut out = format!(
            "total: {}\ncertification: {}\norder_count: {}\n",
            self.total, self.certification, self.order_count
        );
        out.push_str("position  index_in_maximal  weak_classes  pic\n");
        for r in &self.orders {
            out.push_str(&format!(
                "{}  {}  {}  {}\n",
                r.position, r.index_in_maximal, r.weak_classes, r.pic
            ));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "position".into(),
            "index_in_maximal".into(),
            "weak_classes".into(),
            "pic".into(),
        ]);
        for r in &self.orders {
            out.push_str(&csv_line(&[
                r.position.to_string(),
                r.index_in_maximal.clone(),
                r.weak_classes.clone(),
                r.pic.clone(),
            ]));
        }
        out
    }

    fn conditional(&self) -> bool {
        self.certification != "exact"
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct MatrixClassesReport {
    pub count: String,
    pub representatives: Vec<Vec<Vec<String>>>,
}

impl Report for MatrixClassesReport {
    fn text(&self) -> String {
        let mut out = format!("count: {}\n", self.count);
        for (k, m) in self.representatives.iter().enumerate() {
            let width = m
                .iter()
                .flat_map(|row| row.iter().map(|e| e.len()))
                .max()
                .unwrap_or(1);
            out.push_str(&format!("class {k}:\n"));
            for row in m {
                let cells: Vec<String> = row.iter().map(|e| format!("{e:>width$}")).collect();
                out.push_str(&format!("  [{}]\n", cells.join(" ")));
            }
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&["class".into(), "matrix".into()]);
        for (k, m) in self.representatives.iter().enumerate() {
            let flat = m
                .iter()
                .map(|row| row.join(" "))
                .collect::<Vec<_>>()
                .join("; ");
            out.push_str(&csv_line(&[k.to_string(), flat]));
        }
        out
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct AvReport {
    pub q: String,
    pub total: String,
    pub certification: String,
    pub order_count: String,
}

impl Report for AvReport {
    fn text(&self) -> String {
        format!(
            "q: {}\ntotal: {}\ncertification: {}\norder_count: {}\n",
            self.q, self.total, self.certification, self.order_count
        )
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "q".into(),
            "total".into(),
            "certification".into(),
            "order_count".into(),
        ]);
        out.push_str(&csv_line(&[
            self.q.clone(),
            self.total.clone(),
            self.certification.clone(),
            self.order_count.clone(),
        ]));
        out
    }

    fn conditional(&self) -> bool {
        self.certification != "exact"
    }
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CompareRow {
    pub position: usize,
    pub index_in_maximal: String,
    pub global_type: usize,
    pub gorenstein: bool,
    pub nearly_gorenstein: bool,
    pub almost_gorenstein: bool,
    pub trace_ideal_is_ring: bool,
}

#[derive(Serialize, Deserialize, Clone)]
pub struct CompareReport {
    pub order_count: String,
    pub gorenstein_count: String,
    pub nearly_gorenstein_count: String,
    pub almost_gorenstein_count: String,
    pub orders: Vec<CompareRow>,
}

impl Report for CompareReport {
    fn text(&self) -> String {
        let mut out = format!(
            "order_count: {}\ngorenstein_count: {}\nnearly_gorenstein_count: {}\nalmost_gorenstein_count: {}\n",
            self.order_count,
            self.gorenstein_count,
            self.nearly_gorenstein_count,
            self.almost_gorenstein_count
        );
        out.push_str(
            "position  index_in_maximal  global_type  gorenstein  nearly  almost  trace_ideal_is_ring\n",
        );
        for r in &self.orders {
            out.push_str(&format!(
                "{}  {}  {}  {}  {}  {}  {}\n",
                r.position,
                r.index_in_maximal,
                r.global_type,
                r.gorenstein,
                r.nearly_gorenstein,
                r.almost_gorenstein,
                r.trace_ideal_is_ring
            ));
        }
        out
    }

    fn csv(&self) -> String {
        let mut out = csv_line(&[
            "position".into(),
            "index_in_maximal".into(),
            "global_type".into(),
            "gorenstein".into(),
            "nearly_gorenstein".into(),
            "almost_gorenstein".into(),
            "trace_ideal_is_ring".into(),
        ]);
        for r in &self.orders {
            out.push_str(&csv_line(&[
                r.position.to_string(),
                r.index_in_maximal.clone(),
                r.global_type.to_string(),
                r.gorenstein.to_string(),
                r.nearly_gorenstein.to_string(),
                r.almost_gorenstein.to_string(),
                r.trace_ideal_is_ring.to_string(),
            ]));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_fields_quote_only_when_needed() {
        assert_eq!(field("plain"), "plain");
        assert_eq!(field("a,b"), "\"a,b\"");
        assert_eq!(field("say \"hi\""), "\"say \"\"hi\"\"\"");
    }

    #[test]
    fn certifications_render() {
        assert_eq!(cert_string(&Certification::Exact), "exact");
        assert_eq!(
            cert_string(&Certification::Conditional("bound 60".into())),
            "conditional(bound 60)"
        );
    }

    #[test]
    fn conditional_flag_follows_certification() {
        let mut r = PicReport {
            pic: "4".into(),
            certification: "exact".into(),
            h_maximal: "4".into(),
            h_certification: "exact".into(),
            unit_generators: 2,
        };
        assert!(!r.conditional());
        r.certification = "conditional(bound 60)".into();
        assert!(r.conditional());
    }
}
