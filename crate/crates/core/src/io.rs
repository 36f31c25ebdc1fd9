//! On-disk document schemas (JSON) for value sets, topologies, spaces and
//! entourage bases, with writers that round-trip exactly.
//!
//! Value-set documents name elements by label and the writer always emits the
//! neutral element first, so re-ingested tables have neutral index 0.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::mvs::{MvsError, MvsTable};
use crate::qmetric::{QmError, QmSpace};
use crate::quniform::Entourage;
use crate::set::PointSet;
use crate::topo::{FiniteTopology, TopoError};

#[derive(Debug, Error)]
pub enum IoError {
    #[error("malformed document: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unknown label {0:?}")]
    UnknownLabel(String),
    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),
    #[error("table is not square")]
    NotSquare,
    #[error("unresolved value-set reference {0:?}")]
    UnresolvedRef(String),
    #[error(transparent)]
    Mvs(#[from] MvsError),
    #[error(transparent)]
    Topo(#[from] TopoError),
    #[error(transparent)]
    Qm(#[from] QmError),
}

fn index_of(labels: &[String], l: &str) -> Result<usize, IoError> {
    labels
        .iter()
        .position(|x| x == l)
        .ok_or_else(|| IoError::UnknownLabel(l.to_string()))
}

fn check_unique(labels: &[String]) -> Result<(), IoError> {
    for (i, l) in labels.iter().enumerate() {
        if labels[..i].contains(l) {
            return Err(IoError::DuplicateLabel(l.clone()));
        }
    }
    Ok(())
}

/// `{"labels": [...], "neutral": "<label>", "table": [[labels]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MvsDoc {
    pub labels: Vec<String>,
    pub neutral: String,
    pub table: Vec<Vec<String>>,
}

impl MvsDoc {
    pub fn from_table(m: &MvsTable) -> MvsDoc {
        // Emit the neutral element first.
        let k = m.order();
        let order: Vec<usize> =
            std::iter::once(m.neutral()).chain((0..k).filter(|&i| i != m.neutral())).collect();
        let labels: Vec<String> = order.iter().map(|&i| m.label(i).to_string()).collect();
        let table = order
            .iter()
            .map(|&a| order.iter().map(|&b| m.label(m.add(a, b)).to_string()).collect())
            .collect();
        MvsDoc { labels: labels.clone(), neutral: labels[0].clone(), table }
    }

    pub fn parse(&self) -> Result<MvsTable, IoError> {
        check_unique(&self.labels)?;
        let neutral = index_of(&self.labels, &self.neutral)?;
        if self.table.len() != self.labels.len() {
            return Err(IoError::NotSquare);
        }
        let mut table = Vec::with_capacity(self.table.len());
        for row in &self.table {
            if row.len() != self.labels.len() {
                return Err(IoError::NotSquare);
            }
            table.push(
                row.iter()
                    .map(|l| index_of(&self.labels, l))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(MvsTable::validate(self.labels.clone(), neutral, table)?)
    }
}

/// `{"points": [...], "opens": [["a"], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TopologyDoc {
    pub points: Vec<String>,
    pub opens: Vec<Vec<String>>,
}

impl TopologyDoc {
    /// Writes every open set, sorted; refuses carriers too large to
    /// materialize.
    pub fn from_topology(points: &[String], t: &FiniteTopology) -> Result<TopologyDoc, IoError> {
        assert_eq!(points.len(), t.points());
        let opens = t
            .opens()?
            .iter()
            .map(|s| s.iter().map(|i| points[i].clone()).collect())
            .collect();
        Ok(TopologyDoc { points: points.to_vec(), opens })
    }

    pub fn parse(&self) -> Result<FiniteTopology, IoError> {
        check_unique(&self.points)?;
        let n = self.points.len();
        let mut opens = Vec::with_capacity(self.opens.len());
        for o in &self.opens {
            let mut s = PointSet::empty(n);
            for l in o {
                s.insert(index_of(&self.points, l)?);
            }
            opens.push(s);
        }
        Ok(FiniteTopology::from_opens(n, &opens)?)
    }

    /// Subbase-style parse: generate the smallest topology containing the
    /// listed sets instead of requiring a full open family.
    pub fn parse_as_subbase(&self) -> Result<FiniteTopology, IoError> {
        check_unique(&self.points)?;
        let n = self.points.len();
        let mut sets = Vec::with_capacity(self.opens.len());
        for o in &self.opens {
            let mut s = PointSet::empty(n);
            for l in o {
                s.insert(index_of(&self.points, l)?);
            }
            sets.push(s);
        }
        Ok(FiniteTopology::generate(n, &sets))
    }
}

/// The value-set slot of a space document: inline table or a file reference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MvsRef {
    Inline(MvsDoc),
    File(String),
}

/// `{"points": [...], "mvs": <inline or path>, "d": [[labels]]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDoc {
    pub points: Vec<String>,
    pub mvs: MvsRef,
    pub d: Vec<Vec<String>>,
}

impl SpaceDoc {
    pub fn from_space(q: &QmSpace) -> SpaceDoc {
        let m = q.mvs();
        let d = q
            .matrix()
            .iter()
            .map(|row| row.iter().map(|&v| m.label(v).to_string()).collect())
            .collect();
        SpaceDoc {
            points: q.points().to_vec(),
            mvs: MvsRef::Inline(MvsDoc::from_table(m)),
            d,
        }
    }

    /// Parses with a resolver for file references (the caller decides how
    /// paths are read).
    pub fn parse(
        &self,
        resolve: impl Fn(&str) -> Result<MvsDoc, IoError>,
    ) -> Result<QmSpace, IoError> {
        check_unique(&self.points)?;
        let doc = match &self.mvs {
            MvsRef::Inline(doc) => doc.clone(),
            MvsRef::File(path) => resolve(path)?,
        };
        let m = Arc::new(doc.parse()?);
        if self.d.len() != self.points.len() {
            return Err(IoError::NotSquare);
        }
        let mut d = Vec::with_capacity(self.d.len());
        for row in &self.d {
            if row.len() != self.points.len() {
                return Err(IoError::NotSquare);
            }
            d.push(
                row.iter()
                    .map(|l| m.index_of(l).ok_or_else(|| IoError::UnknownLabel(l.clone())))
                    .collect::<Result<Vec<_>, _>>()?,
            );
        }
        Ok(QmSpace::validate(self.points.clone(), m, d)?)
    }
}

/// One named relation in a base document.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntourageDoc {
    pub name: String,
    pub pairs: Vec<(String, String)>,
}

/// `{"points": [...], "implicit_diagonal": bool, "entourages": [...]}`.
/// When `implicit_diagonal` is set the diagonal is added to every member on
/// ingest; otherwise the pairs are taken literally.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseDoc {
    pub points: Vec<String>,
    #[serde(default)]
    pub implicit_diagonal: bool,
    pub entourages: Vec<EntourageDoc>,
}

impl BaseDoc {
    pub fn from_base(points: &[String], named: &[(String, Entourage)]) -> BaseDoc {
        let entourages = named
            .iter()
            .map(|(name, u)| EntourageDoc {
                name: name.clone(),
                pairs: u
                    .pairs()
                    .iter()
                    .map(|&(x, y)| (points[x].clone(), points[y].clone()))
                    .collect(),
            })
            .collect();
        BaseDoc { points: points.to_vec(), implicit_diagonal: false, entourages }
    }

    pub fn parse(&self) -> Result<Vec<(String, Entourage)>, IoError> {
        check_unique(&self.points)?;
        let n = self.points.len();
        let mut out = Vec::with_capacity(self.entourages.len());
        for e in &self.entourages {
            let mut u = if self.implicit_diagonal {
                Entourage::diagonal(n)
            } else {
                Entourage::empty(n)
            };
            for (a, b) in &e.pairs {
                u.insert(index_of(&self.points, a)?, index_of(&self.points, b)?);
            }
            out.push((e.name.clone(), u));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mvs_doc_roundtrip_and_neutral_first() {
        let m = MvsTable::max_mvs(3);
        let doc = MvsDoc::from_table(&m);
        assert_eq!(doc.labels[0], doc.neutral);
        let back = doc.parse().unwrap();
        assert_eq!(back.rows(), m.rows());
        assert_eq!(MvsDoc::from_table(&back), doc);
        // JSON round-trip.
        let text = serde_json::to_string(&doc).unwrap();
        let again: MvsDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(again, doc);
    }

    #[test]
    fn mvs_doc_reorders_nonzero_neutral() {
        // A table whose neutral element is not listed first re-emits with the
        // neutral first and still validates.
        let doc = MvsDoc {
            labels: vec!["a".into(), "e".into()],
            neutral: "e".into(),
            table: vec![vec!["a".into(), "a".into()], vec!["a".into(), "e".into()]],
        };
        let m = doc.parse().unwrap();
        assert_eq!(m.neutral(), 1);
        let emitted = MvsDoc::from_table(&m);
        assert_eq!(emitted.labels, vec!["e".to_string(), "a".to_string()]);
        assert_eq!(emitted.parse().unwrap().neutral(), 0);
    }

    #[test]
    fn mvs_doc_errors() {
        let doc = MvsDoc {
            labels: vec!["0".into(), "0".into()],
            neutral: "0".into(),
            table: vec![vec!["0".into(); 2]; 2],
        };
        assert!(matches!(doc.parse(), Err(IoError::DuplicateLabel(_))));
        let doc = MvsDoc {
            labels: vec!["0".into(), "1".into()],
            neutral: "2".into(),
            table: vec![vec!["0".into(); 2]; 2],
        };
        assert!(matches!(doc.parse(), Err(IoError::UnknownLabel(_))));
    }

    #[test]
    fn topology_doc_roundtrip() {
        let t = FiniteTopology::generate(
            3,
            &[PointSet::from_indices(3, &[0, 1]), PointSet::from_indices(3, &[1, 2])],
        );
        let points: Vec<String> = vec!["1".into(), "2".into(), "3".into()];
        let doc = TopologyDoc::from_topology(&points, &t).unwrap();
        assert_eq!(doc.parse().unwrap(), t);
        assert_eq!(doc.parse_as_subbase().unwrap(), t);
        // A bare subbase parses through the generator but not literally.
        let sub = TopologyDoc {
            points,
            opens: vec![vec!["1".into(), "2".into()], vec!["2".into(), "3".into()]],
        };
        assert!(sub.parse().is_err());
        assert_eq!(sub.parse_as_subbase().unwrap(), t);
    }

    #[test]
    fn space_doc_roundtrip_inline_and_file() {
        let m = Arc::new(MvsTable::max_mvs(3));
        let q = crate::qmetric::canonical_metric_space(&m).unwrap();
        let doc = SpaceDoc::from_space(&q);
        let back = doc.parse(|_| Err(IoError::UnresolvedRef("no files".into()))).unwrap();
        assert_eq!(back, q);

        let by_ref = SpaceDoc { points: doc.points.clone(), mvs: MvsRef::File("m.json".into()), d: doc.d.clone() };
        let resolved = by_ref
            .parse(|path| {
                assert_eq!(path, "m.json");
                Ok(MvsDoc::from_table(&m))
            })
            .unwrap();
        assert_eq!(resolved, q);
        // Untagged serialization keeps the two shapes distinguishable.
        let text = serde_json::to_string(&by_ref).unwrap();
        let again: SpaceDoc = serde_json::from_str(&text).unwrap();
        assert_eq!(again, by_ref);
    }

    #[test]
    fn base_doc_roundtrip_and_implicit_diagonal() {
        let points: Vec<String> = vec!["a".into(), "b".into()];
        let u = Entourage::from_pairs(2, &[(0, 0), (1, 1), (1, 0)]);
        let doc = BaseDoc::from_base(&points, &[("U1".into(), u.clone())]);
        let parsed = doc.parse().unwrap();
        assert_eq!(parsed, vec![("U1".to_string(), u.clone())]);

        let implicit = BaseDoc {
            points,
            implicit_diagonal: true,
            entourages: vec![EntourageDoc { name: "U1".into(), pairs: vec![("b".into(), "a".into())] }],
        };
        assert_eq!(implicit.parse().unwrap()[0].1, u);
        // Default is literal pairs.
        let text = r#"{"points":["a","b"],"entourages":[{"name":"U","pairs":[["a","b"]]}]}"#;
        let doc: BaseDoc = serde_json::from_str(text).unwrap();
        assert!(!doc.implicit_diagonal);
        assert_eq!(doc.parse().unwrap()[0].1, Entourage::from_pairs(2, &[(0, 1)]));
    }
}
