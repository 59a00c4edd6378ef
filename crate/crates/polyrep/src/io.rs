//! File formats: the plain-text halfspace grammar, the JSON document for
//! constructed polynomial systems (all rationals as `p/q` strings), the
//! human-readable factored text listing, and CSV grid evaluation.

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::construct::PRepresentation;
use crate::error::{Error, Result};
use crate::hrep::HPolytope;
use crate::num::{format_rat, parse_rat, rat, Rat, RatVec};
use crate::poly::{EpsilonPoly, EpsilonTerm, LinearForm, ProductPoly, SparsePoly};
use crate::verify::{epsilon_vs_one, member_hrep, member_prep, EvalMode};

/// Parses the halfspace grammar: `#` comment lines, a `d m` header, then `m`
/// lines of `d+1` whitespace-separated rationals (`a_1 ... a_d b`).
pub fn parse_hrep(text: &str) -> Result<HPolytope> {
    let mut data_lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = data_lines
        .next()
        .ok_or_else(|| Error::Parse {
            line: 0,
            msg: "empty input".to_string(),
        })?;
    let parts: Vec<&str> = header.split_whitespace().collect();
    if parts.len() != 2 {
        return Err(Error::Parse {
            line: header_line,
            msg: format!("expected header `d m`, got `{header}`"),
        });
    }
    let parse_count = |s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line: header_line,
            msg: format!("invalid count `{s}`"),
        })
    };
    let d = parse_count(parts[0])?;
    let m = parse_count(parts[1])?;
    if d == 0 {
        return Err(Error::Parse {
            line: header_line,
            msg: "dimension must be positive".to_string(),
        });
    }

    let mut rows = Vec::with_capacity(m);
    for _ in 0..m {
        let (line, content) = data_lines.next().ok_or_else(|| Error::Parse {
            line: text.lines().count(),
            msg: format!("expected {m} rows, input ended early"),
        })?;
        let entries: Vec<&str> = content.split_whitespace().collect();
        if entries.len() != d + 1 {
            return Err(Error::Parse {
                line,
                msg: format!("expected {} entries, got {}", d + 1, entries.len()),
            });
        }
        let values: Vec<Rat> = entries
            .iter()
            .map(|e| parse_rat(e).map_err(|msg| Error::Parse { line, msg }))
            .collect::<Result<_>>()?;
        let b = values[d].clone();
        rows.push((values[..d].to_vec(), b));
    }
    if let Some((line, content)) = data_lines.next() {
        return Err(Error::Parse {
            line,
            msg: format!("unexpected trailing data `{content}`"),
        });
    }
    Ok(HPolytope::new(d, rows))
}

pub fn emit_hrep(h: &HPolytope) -> String {
    let mut out = format!("{} {}\n", h.dim, h.m());
    for (a, b) in &h.rows {
        let mut fields: Vec<String> = a.iter().map(format_rat).collect();
        fields.push(format_rat(b));
        out.push_str(&fields.join(" "));
        out.push('\n');
    }
    out
}

pub const CONVENTION: &str = "products>=0;epsilon<=1";

#[derive(Debug, Serialize, Deserialize)]
struct LinearFormDoc {
    c0: String,
    coeffs: Vec<String>,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProductDoc {
    k: usize,
    w: Vec<u64>,
    factors: Vec<LinearFormDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EpsilonTermDoc {
    a: Vec<String>,
    b: String,
    h_minus: String,
}

#[derive(Debug, Serialize, Deserialize)]
struct EpsilonDoc {
    terms: Vec<EpsilonTermDoc>,
    weight: String,
    two_p: u64,
}

#[derive(Debug, Serialize, Deserialize)]
struct PRepDoc {
    dimension: usize,
    convention: String,
    mu: String,
    source_hash: String,
    shift: Vec<String>,
    products: Vec<ProductDoc>,
    epsilon: EpsilonDoc,
}

fn rats_to_strings(v: &[Rat]) -> Vec<String> {
    v.iter().map(format_rat).collect()
}

fn strings_to_rats(v: &[String]) -> Result<RatVec> {
    v.iter()
        .map(|s| parse_rat(s).map_err(|msg| Error::Parse { line: 0, msg }))
        .collect()
}

fn parse_doc_rat(s: &str) -> Result<Rat> {
    parse_rat(s).map_err(|msg| Error::Parse { line: 0, msg })
}

pub fn emit_prep_json(prep: &PRepresentation) -> String {
    let doc = PRepDoc {
        dimension: prep.dim,
        convention: CONVENTION.to_string(),
        mu: prep.mu.to_string(),
        source_hash: prep.source_hash.clone(),
        shift: rats_to_strings(&prep.shift),
        products: prep
            .products
            .iter()
            .map(|p| ProductDoc {
                k: p.k,
                w: p.w.clone(),
                factors: p
                    .factors
                    .iter()
                    .map(|f| LinearFormDoc {
                        c0: format_rat(&f.c0),
                        coeffs: rats_to_strings(&f.coeffs),
                    })
                    .collect(),
            })
            .collect(),
        epsilon: EpsilonDoc {
            terms: prep
                .epsilon
                .terms
                .iter()
                .map(|t| EpsilonTermDoc {
                    a: rats_to_strings(&t.a),
                    b: format_rat(&t.b),
                    h_minus: format_rat(&t.h_minus),
                })
                .collect(),
            weight: format_rat(&prep.epsilon.weight),
            two_p: prep.epsilon.two_p,
        },
    };
    serde_json::to_string_pretty(&doc).expect("document serialization cannot fail")
}

pub fn parse_prep_json(text: &str) -> Result<PRepresentation> {
    let doc: PRepDoc = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    if doc.convention != CONVENTION {
        return Err(Error::Parse {
            line: 0,
            msg: format!("unknown convention marker `{}`", doc.convention),
        });
    }
    let shift = strings_to_rats(&doc.shift)?;
    let products = doc
        .products
        .into_iter()
        .map(|p| {
            Ok(ProductPoly {
                k: p.k,
                w: p.w,
                factors: p
                    .factors
                    .iter()
                    .map(|f| {
                        Ok(LinearForm::new(
                            parse_doc_rat(&f.c0)?,
                            strings_to_rats(&f.coeffs)?,
                        ))
                    })
                    .collect::<Result<_>>()?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let epsilon = EpsilonPoly {
        terms: doc
            .epsilon
            .terms
            .iter()
            .map(|t| {
                Ok(EpsilonTerm {
                    a: strings_to_rats(&t.a)?,
                    b: parse_doc_rat(&t.b)?,
                    h_minus: parse_doc_rat(&t.h_minus)?,
                })
            })
            .collect::<Result<_>>()?,
        weight: parse_doc_rat(&doc.epsilon.weight)?,
        two_p: doc.epsilon.two_p,
        shift: shift.clone(),
    };
    let mu: u128 = doc.mu.parse().map_err(|_| Error::Parse {
        line: 0,
        msg: format!("invalid polynomial count `{}`", doc.mu),
    })?;
    Ok(PRepresentation {
        dim: doc.dimension,
        products,
        epsilon,
        shift,
        mu,
        source_hash: doc.source_hash,
    })
}

/// Human-readable factored listing, one block per polynomial.
pub fn emit_prep_text(prep: &PRepresentation) -> String {
    let mut out = format!(
        "# dimension {}  polynomials {}  source {}\n",
        prep.dim,
        prep.mu,
        &prep.source_hash[..16.min(prep.source_hash.len())]
    );
    for p in &prep.products {
        out.push_str(&p.id());
        out.push_str(" =\n  ");
        for f in &p.factors {
            out.push_str(&f.text());
        }
        out.push('\n');
    }
    let ep = &prep.epsilon;
    out.push_str(&format!(
        "p_eps =  # {} terms, exponent {}\n",
        ep.terms.len(),
        ep.two_p
    ));
    for i in 0..ep.terms.len() {
        let num = ep.term_numerator(i);
        let num_text = num.text();
        let inner = &num_text[1..num_text.len() - 1];
        out.push_str(&format!(
            "  + ({})*[({})/{}]^{}\n",
            format_rat(&ep.weight),
            inner,
            format_rat(&ep.term_denominator(i)),
            ep.two_p
        ));
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

pub fn emit_prep(prep: &PRepresentation, format: Format) -> String {
    match format {
        Format::Json => emit_prep_json(prep),
        Format::Text => emit_prep_text(prep),
    }
}

const GRID_MAX_CELLS: u128 = 1_000_000;

/// Row-major CSV scan of a box: point coordinates, the sign of each
/// polynomial, and both membership bits. Signs: for products the exact sign,
/// for the power sum the sign of `1 - p_eps`.
pub fn grid_eval_csv(
    h: &HPolytope,
    prep: &PRepresentation,
    lo: &[Rat],
    hi: &[Rat],
    step: &Rat,
) -> Result<String> {
    use num_traits::Signed;
    let d = h.dim;
    if d != 2 && d != 3 {
        return Err(Error::Unsupported(format!(
            "grid emission supports d in {{2, 3}}, got {d}"
        )));
    }
    if lo.len() != d || hi.len() != d || prep.dim != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            got: lo.len().min(hi.len()).min(prep.dim),
        });
    }
    if !step.is_positive() {
        return Err(Error::Unsupported("grid step must be positive".to_string()));
    }

    let mut header: Vec<String> = (1..=d).map(|i| format!("x{i}")).collect();
    for p in &prep.products {
        // Ids contain commas; quote them so the header stays one field per
        // column.
        header.push(format!("\"{}\"", p.id()));
    }
    header.push("p_eps".to_string());
    header.push("member_prep".to_string());
    header.push("member_hrep".to_string());
    let mut out = header.join(",");
    out.push('\n');

    // Axis counts; an inverted box yields the header only.
    let mut counts: Vec<u128> = Vec::with_capacity(d);
    for j in 0..d {
        if hi[j] < lo[j] {
            return Ok(out);
        }
        let n = ((&hi[j] - &lo[j]) / step).floor().to_integer();
        let n: u128 = n.to_string().parse().expect("nonnegative count");
        counts.push(n + 1);
    }
    if counts.iter().product::<u128>() > GRID_MAX_CELLS {
        return Err(Error::ResourceGuard(
            "grid cell count exceeds the emission limit".to_string(),
        ));
    }

    let mut idx = vec![0u128; d];
    loop {
        let x: RatVec = (0..d)
            .map(|j| &lo[j] + rat(idx[j] as i64) * step)
            .collect();
        let mut fields: Vec<String> = x.iter().map(format_rat).collect();
        for p in &prep.products {
            fields.push(p.sign(&x).to_string());
        }
        let eps_sign = match epsilon_vs_one(&prep.epsilon, &x, EvalMode::Guarded)? {
            Ordering::Less => 1,
            Ordering::Equal => 0,
            Ordering::Greater => -1,
        };
        fields.push(eps_sign.to_string());
        let in_p = member_prep(prep, &x, EvalMode::Guarded)?.inside;
        let in_h = member_hrep(h, &x).inside;
        fields.push((in_p as u8).to_string());
        fields.push((in_h as u8).to_string());
        out.push_str(&fields.join(","));
        out.push('\n');

        // Row-major advance: last coordinate fastest.
        let mut j = d;
        loop {
            if j == 0 {
                return Ok(out);
            }
            j -= 1;
            idx[j] += 1;
            if idx[j] < counts[j] {
                break;
            }
            idx[j] = 0;
        }
    }
}

/// JSON document for expanded polynomial lists (lifts, projective pullbacks).
#[derive(Debug, Serialize, Deserialize)]
struct SparsePolyDoc {
    dim: usize,
    terms: Vec<(Vec<u32>, String)>,
}

pub fn emit_sparse_polys_json(polys: &[SparsePoly]) -> String {
    let docs: Vec<SparsePolyDoc> = polys
        .iter()
        .map(|p| SparsePolyDoc {
            dim: p.dim,
            terms: p
                .terms
                .iter()
                .map(|(e, c)| (e.clone(), format_rat(c)))
                .collect(),
        })
        .collect();
    serde_json::to_string_pretty(&docs).expect("document serialization cannot fail")
}

pub fn parse_sparse_polys_json(text: &str) -> Result<Vec<SparsePoly>> {
    let docs: Vec<SparsePolyDoc> = serde_json::from_str(text).map_err(|e| Error::Parse {
        line: e.line(),
        msg: e.to_string(),
    })?;
    docs.into_iter()
        .map(|doc| {
            let mut p = SparsePoly::zero(doc.dim);
            for (e, c) in doc.terms {
                p.add_term(e, parse_doc_rat(&c)?);
            }
            Ok(p)
        })
        .collect()
}

pub fn emit_sparse_polys_text(polys: &[SparsePoly]) -> String {
    let mut out = String::new();
    for (i, p) in polys.iter().enumerate() {
        out.push_str(&format!("q_{} = {}\n", i + 1, p.text()));
    }
    out
}
