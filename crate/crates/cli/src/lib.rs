//! Job runner behind the `quadlat` binary: one JSON job in, one report out.

pub mod error;
pub mod job;
pub mod report;

use serde_json::{json, Value};

use quadlat::embedding::{find_embedding, omeara_embeds, omeara_levels, springer_verify};
use quadlat::global::{everywhere_local_embeds, everywhere_local_embeds_at, local_at};
use quadlat::spinor::{fast_path_agrees, kneser_spinor_norms, norm_principle_verify, transporter_norms};
use quadlat::{Field, QuadLattice};

pub use error::CliError;
use error::Context;
pub use job::{Command, JobSpec};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub format: Format,
    pub check_fast_path: bool,
}

/// Parse and run a job document, returning the rendered report.
pub fn run(text: &str, opts: &Options) -> Result<String, CliError> {
    let job = JobSpec::parse(text)?;
    let doc = execute(&job, opts)?;
    Ok(match opts.format {
        Format::Json => serde_json::to_string_pretty(&doc).expect("serializable") + "\n",
        Format::Text => report::text(&doc),
    })
}

/// Run a parsed job and build the report document.
pub fn execute(job: &JobSpec, opts: &Options) -> Result<Value, CliError> {
    let (verdicts, witnesses, trace) = match job.command {
        Command::Jordan => jordan(job)?,
        Command::Embeds => embeds(job)?,
        Command::FindEmbedding => find(job)?,
        Command::Spinor => spinor(job)?,
        Command::Transporter => transporter(job, opts.check_fast_path)?,
        Command::Springer => springer(job)?,
        Command::NormPrinciple => norm_principle(job)?,
        Command::GlobalEmbeds => global(job)?,
        Command::Hilbert => hilbert(job)?,
    };
    Ok(json!({
        "input_echo": serde_json::to_value(job).expect("serializable"),
        "command": job.command.name(),
        "verdicts": verdicts,
        "witnesses": witnesses,
        "trace": trace,
    }))
}

type Parts = (Value, Value, Value);

fn pair(job: &JobSpec, field: &Field) -> Result<(QuadLattice, QuadLattice), CliError> {
    Ok((job.lattice(field, "gram_n", &job.gram_n)?, job.lattice(field, "gram", &job.gram)?))
}

fn levels(n: &QuadLattice, m: &QuadLattice) -> Result<Value, CliError> {
    let levels = omeara_levels(n, m).context("gram_n")?;
    Ok(levels
        .iter()
        .map(|l| {
            json!({
                "exponent": l.exponent,
                "n": report::invariants(&l.n),
                "m": report::invariants(&l.m),
                "represented": l.represented,
            })
        })
        .collect())
}

fn jordan(job: &JobSpec) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let m = job.lattice(&field, "gram", &job.gram)?;
    let j = m.jordan_split().context("gram")?;
    let verdicts = json!({ "components": report::jordan(&j)?, "modular": j.components.len() <= 1 });
    let witnesses = json!({ "basis": report::matrix(&field, &j.transition) });
    Ok((verdicts, witnesses, json!([])))
}

fn embeds(job: &JobSpec) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let (n, m) = pair(job, &field)?;
    let verdict = omeara_embeds(&n, &m).context("gram_n")?;
    Ok((json!({ "embeds": verdict }), json!({}), levels(&n, &m)?))
}

fn find(job: &JobSpec) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let (n, m) = pair(job, &field)?;
    let verdict = omeara_embeds(&n, &m).context("gram_n")?;
    let w = if verdict { find_embedding(&n, &m).context("gram_n")? } else { None };
    let witnesses = match &w {
        Some(w) => json!({
            "embedding": report::matrix(&field, &w.matrix),
            "residual": w.residual.map(|r| r.to_string()),
        }),
        None => json!({ "embedding": null, "residual": null }),
    };
    let verdicts = json!({ "embeds": verdict, "witness_found": w.is_some() });
    Ok((verdicts, witnesses, json!([])))
}

fn spinor(job: &JobSpec) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let m = job.lattice(&field, "gram", &job.gram)?;
    let s = kneser_spinor_norms(&m).context("gram")?;
    let verdicts = json!({
        "theta_o": report::subgroup(s.theta_o),
        "theta_o_plus": report::subgroup(s.theta_o_plus),
    });
    let j = m.jordan_split().context("gram")?;
    Ok((verdicts, json!({}), json!({ "components": report::jordan(&j)? })))
}

fn transporter(job: &JobSpec, check: bool) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let (n, m) = pair(job, &field)?;
    let inj = job.matrix(&field, "injection", &job.injection)?;
    let t = transporter_norms(&m, &n, &inj).context("injection")?;
    let mut verdicts = json!({
        "theta_x": report::subgroup(t.theta_x),
        "theta_x_plus": report::subgroup(t.theta_x_plus),
    });
    if check {
        verdicts["fast_path_agrees"] = json!(fast_path_agrees(&m, &n, &inj).context("injection")?);
    }
    let trace =
        t.trace.iter().map(|s| json!({ "step": s.reduction.name(), "rank": s.rank, "scale": s.scale })).collect();
    Ok((verdicts, json!({}), trace))
}

/// Lattices over the base field and the tower as the extension.
fn base_and_ext(job: &JobSpec) -> Result<(Field, Field), CliError> {
    if job.tower.is_empty() {
        return Err(CliError::Malformed(format!("tower: required by command {}", job.command.name())));
    }
    Ok((Field::new(job.base_field()?), job.tower_field()?))
}

fn springer(job: &JobSpec) -> Result<Parts, CliError> {
    let (field, ext) = base_and_ext(job)?;
    let (n, m) = pair(job, &field)?;
    let r = springer_verify(&n, &m, &ext).context("gram_n")?;
    let mut verdicts = json!({
        "embeds_base": r.embeds_base,
        "embeds_ext": r.embeds_ext,
        "degree": ext.degree(),
        "degree_odd": r.degree_odd,
    });
    if r.degree_odd {
        verdicts["consistent"] = json!(r.consistent);
    }
    Ok((verdicts, json!({}), json!([])))
}

fn norm_principle(job: &JobSpec) -> Result<Parts, CliError> {
    let (field, ext) = base_and_ext(job)?;
    let (n, m) = pair(job, &field)?;
    let inj = job.matrix(&field, "injection", &job.injection)?;
    let r = norm_principle_verify(&m, &n, &inj, &ext).context("injection")?;
    let verdicts = json!({
        "holds_x": r.holds_x,
        "holds_x_plus": r.holds_x_plus,
        "holds_o": r.holds_o,
        "holds_o_plus": r.holds_o_plus,
        "all": r.all(),
    });
    Ok((verdicts, json!({}), json!([])))
}

fn global(job: &JobSpec) -> Result<Parts, CliError> {
    let n = job.global_lattice("gram_n", &job.gram_n)?;
    let m = job.global_lattice("gram", &job.gram)?;
    let places = job.place_list(m.constants())?;
    let r = match &places {
        Some(ps) => everywhere_local_embeds_at(&n, &m, ps).context("places")?,
        None => everywhere_local_embeds(&n, &m).context("gram")?,
    };
    let mut trace = Vec::new();
    for v in &r.places {
        let name = v.place.to_string();
        let ln = local_at(&n, &v.place).context("gram_n")?;
        let lm = local_at(&m, &v.place).context("gram")?;
        trace.push(json!({
            "place": name,
            "n_jordan": report::jordan(&ln.jordan_split().context("gram_n")?)?,
            "m_jordan": report::jordan(&lm.jordan_split().context("gram")?)?,
            "levels": levels(&ln, &lm)?,
        }));
    }
    let verdicts = json!({
        "places": r.places.iter().map(|v| json!({ "place": v.place.to_string(), "embeds": v.embeds })).collect::<Vec<_>>(),
        "good_places": r.good_places,
        "holds": r.holds(),
    });
    Ok((verdicts, json!({}), Value::Array(trace)))
}

fn hilbert(job: &JobSpec) -> Result<Parts, CliError> {
    let field = job.tower_field()?;
    let a = job.element(&field, "a", &job.a)?;
    let b = job.element(&field, "b", &job.b)?;
    let ca = field.square_class(&a).context("a")?;
    let cb = field.square_class(&b).context("b")?;
    let symbol = field.hilbert_symbol(&a, &b).context("a")?;
    let verdicts = json!({ "symbol": symbol, "class_a": ca.symbol(), "class_b": cb.symbol() });
    Ok((verdicts, json!({}), json!([])))
}
