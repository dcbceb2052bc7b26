//! One function per check kind, each returning a [`Check`].

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde_json::json;
use zcat_core::blur::{blurry_axiom_probe, blurry_topology, gamma_check, powered_blurry_compose, BlurryWitness};
use zcat_core::fincat::{check_functor, quotient_category, FinCat, ObjId};
use zcat_core::fingerprint::{invariant_of, z_equiv};
use zcat_core::modular::{class_types, enumerate_fes, model_axiom_check, precompose, quotient_model, ModelCheckOptions};
use zcat_core::sheaf::{additivity_check, enumerate_presheaves, representable, sheaf_check, squares_vs_sheaf_probe, Presheaf};
use zcat_core::site::{
    distinguished_square_check, grothendieck_axiom_check, nisnevich_component_lemma_check, nisnevich_cover_check,
    powered_cover_check, powered_stability_probe, CoveringAssignment, Family, LadderMorphism, LayeredCategory,
    TopologyWitness,
};
use zcat_core::zlin::{summand_closure, z_compose, z_validate, Linearization, ZMorphism};
use zcat_core::{Error, Verdict};

use crate::doc::{self, Document};
use crate::report::Check;
use crate::resolve::{ctx, err, obj, square, Res, Workspace};

pub struct Options {
    pub budget: u64,
}

fn family_label(c: &FinCat, fam: &Family) -> String {
    let parts: Vec<&str> = fam.iter().map(|&f| c.mor_label(f)).collect();
    format!("{{{}}}", parts.join(", "))
}

fn topology_lines(c: &FinCat, r: &zcat_core::site::TopologyReport) -> Vec<String> {
    let mut out = vec![format!(
        "iso: {}, stability: {}, transitivity: {}",
        r.iso_axiom, r.pullback_stability, r.transitivity
    )];
    if let Some(w) = r.witnesses.first() {
        out.push(match w {
            TopologyWitness::Iso { f } => format!("witness: iso `{}` alone is not covering", c.mor_label(*f)),
            TopologyWitness::Stability { object, family, along, pulled } => format!(
                "witness: {} ∈ K({}) pulled along `{}` gives {}",
                family_label(c, family),
                c.obj_label(*object),
                c.mor_label(*along),
                family_label(c, pulled)
            ),
            TopologyWitness::Transitivity { object, family, composite, .. } => format!(
                "witness: refining {} ∈ K({}) gives {}",
                family_label(c, family),
                c.obj_label(*object),
                family_label(c, composite)
            ),
        });
    }
    for (f, g) in r.unverifiable.iter().take(3) {
        out.push(format!("undeclared pullback of `{}` and `{}`", c.mor_label(*f), c.mor_label(*g)));
    }
    out
}

/// Enumeration guard: a coarse bound on the presheaf search tree.
fn enumerate_guarded(c: &FinCat, max: usize, budget: u64) -> zcat_core::Result<Vec<Presheaf>> {
    let per_object = (max as f64 + 1.0).powi(c.num_objects() as i32);
    let free = c.morphisms().filter(|&f| !c.is_identity(f)).count();
    let per_table = (max.max(1) as f64).powi((max * free) as i32);
    if per_object * per_table > budget as f64 {
        return Err(Error::BudgetExceeded { budget });
    }
    Ok(enumerate_presheaves(c, max))
}

fn presheaf_list(
    ws: &Workspace,
    name: &str,
    c: &Arc<FinCat>,
    names: &[String],
    enumerate: Option<usize>,
    opts: &Options,
) -> Res<Vec<(String, Presheaf)>> {
    let mut out = Vec::new();
    for n in names {
        let (pc, p) = ws.presheaf(n)?;
        if !Arc::ptr_eq(&pc, c) {
            return Err(err(name, format!("presheaf `{n}` is over a different category")));
        }
        out.push((n.clone(), p));
    }
    if let Some(max) = enumerate {
        let all = ctx(name, enumerate_guarded(c, max, opts.budget))?;
        out.extend(all.into_iter().enumerate().map(|(i, p)| (format!("#{i}"), p)));
    }
    Ok(out)
}

pub fn validate(ws: &Workspace, name: &str, d: &Document) -> Res<Option<Check>> {
    let kind = d.kind();
    Ok(Some(match d {
        Document::Category(_) => {
            let c = ws.category(name)?;
            let r = c.validate();
            let summary = vec![format!(
                "{} objects, {} morphisms, {} law violations",
                c.num_objects(),
                c.num_morphisms(),
                r.violations.len()
            )]
            .into_iter()
            .chain(r.violations.iter().take(5).map(|v| c.describe(v)))
            .collect();
            Check::new(name, kind, Verdict::from_bool(r.is_valid()), summary, &r)
        }
        Document::Functor(_) => {
            let f = ws.functor(name)?;
            let r = check_functor(&f);
            let summary = vec![format!(
                "functorial: {}, full: {}, essentially surjective: {}",
                r.functorial, r.full, r.essentially_surjective
            )];
            Check::new(name, kind, Verdict::from_bool(r.functorial), summary, &r)
        }
        Document::ZMorphism(_) => {
            let (_, c, phi) = ws.zmorphism(name)?;
            let r = z_validate(&c, &phi);
            let summary = vec![phi.display(&c), format!("{} violations", r.violations.len())];
            Check::new(name, kind, Verdict::from_bool(r.is_valid()), summary, &r)
        }
        Document::Partition(_) => {
            let (c, r) = ws.partition(name)?;
            let q = ctx(name, quotient_category(&c, &r))?;
            let summary = vec![
                format!("{} blocks, quotient has {} morphisms", r.num_blocks(), q.category.num_morphisms()),
                format!("saturation gaps: {}", q.saturation.len()),
            ];
            Check::new(name, kind, Verdict::Pass, summary, json!({ "blocks": r.num_blocks(), "saturation": q.saturation }))
        }
        Document::ZObject(z) => {
            let c = ws.category(&z.category)?;
            let x = ws.zobject(&c, &z.category, name, &doc::ZRef::Name(name.to_string()))?;
            Check::new(name, kind, Verdict::Pass, vec![x.display(&c)], json!({ "components": x.len() }))
        }
        Document::Covering(_) => {
            let (_, k) = ws.covering(name)?;
            Check::new(name, kind, Verdict::Pass, vec![format!("{} families", k.len())], json!({ "families": k.len() }))
        }
        Document::Pointed(_) => {
            ws.pointed(name)?;
            Check::new(name, kind, Verdict::Pass, Vec::new(), json!({}))
        }
        Document::Presheaf(_) => {
            ws.presheaf(name)?;
            Check::new(name, kind, Verdict::Pass, Vec::new(), json!({}))
        }
        Document::Model(_) => {
            ws.model(name)?;
            Check::new(name, kind, Verdict::Pass, Vec::new(), json!({}))
        }
        Document::Fingerprints(_) => {
            ws.fingerprints(name)?;
            Check::new(name, kind, Verdict::Pass, Vec::new(), json!({}))
        }
        Document::Layered(_) => {
            let l = ws.layered(name)?;
            let n = l.ladders().len();
            Check::new(name, kind, Verdict::Pass, vec![format!("{n} ladders")], json!({ "ladders": n }))
        }
        _ => return Ok(None),
    }))
}

pub fn z_compose_check(ws: &Workspace, name: &str, d: &doc::ZComposeCheck) -> Res<Check> {
    let mut iter = d.chain.iter();
    let first = iter.next().ok_or_else(|| err(name, "empty chain"))?;
    let (cat, c, mut acc) = ws.zmorphism(first)?;
    for n in iter {
        let (cat2, _, psi) = ws.zmorphism(n)?;
        if cat2 != cat {
            return Err(err(name, format!("`{n}` is over `{cat2}`, not `{cat}`")));
        }
        acc = ctx(name, z_compose(&c, &psi, &acc))?;
    }
    terms_check(ws, name, "z_compose", &c, &acc, d.expect.as_deref())
}

fn terms_check(ws: &Workspace, name: &str, kind: &str, c: &FinCat, phi: &ZMorphism, expect: Option<&str>) -> Res<Check> {
    let terms: Vec<(u32, u32, i64, &str)> = phi.terms().map(|t| (t.i, t.j, t.coeff, c.mor_label(t.arrow))).collect();
    let mut summary = vec![phi.display(c)];
    let mut verdict = Verdict::from_bool(z_validate(c, phi).is_valid());
    if let Some(e) = expect {
        let (_, _, want) = ws.zmorphism(e)?;
        let same = want == *phi;
        summary.push(format!("matches `{e}`: {same}"));
        if !same {
            verdict = Verdict::Fail;
        }
    }
    Ok(Check::new(name, kind, verdict, summary, json!({ "source": phi.source().display(c), "target": phi.target().display(c), "terms": terms })))
}

pub fn topology(ws: &Workspace, name: &str, d: &doc::TopologyCheck) -> Res<Check> {
    let (c, k) = ws.covering(&d.covering)?;
    let r = ctx(name, grothendieck_axiom_check(&c, &k))?;
    let verdict = if r.all_pass() {
        Verdict::Pass
    } else if r.witnesses.is_empty() {
        Verdict::Unverifiable
    } else {
        Verdict::Fail
    };
    Ok(Check::new(name, "topology", verdict, topology_lines(&c, &r), &r))
}

pub fn nisnevich(ws: &Workspace, name: &str, d: &doc::NisnevichCheck) -> Res<Check> {
    let (cat, c, base) = ws.pointed(&d.pointed)?;
    let x = ws.zobject(&c, &cat, name, &d.object)?;
    let mut family = Vec::new();
    for m in &d.family {
        let (mc, _, phi) = ws.zmorphism(m)?;
        if mc != cat {
            return Err(err(name, format!("member `{m}` is over `{mc}`, not `{cat}`")));
        }
        family.push(phi);
    }
    if d.lemma {
        let r = ctx(name, nisnevich_component_lemma_check(&c, &base, &family, &x))?;
        let summary = vec![format!("whole cover: {}, componentwise: {}, agree: {}", r.whole, r.componentwise, r.agree)];
        return Ok(Check::new(name, "nisnevich", Verdict::from_bool(r.agree), summary, &r));
    }
    let r = ctx(name, nisnevich_cover_check(&c, &base, &family, &x))?;
    let mut summary = vec![format!("covered: {}", r.covered)];
    for &(j, p) in r.uncovered.iter().take(5) {
        let (xj, _) = x.get(j).expect("component of x");
        summary.push(format!("component {j}: point `{}` has no residue-preserving lift", base.points(xj)[p]));
    }
    Ok(Check::new(name, "nisnevich", Verdict::from_bool(r.covered), summary, &r))
}

pub fn square_check(ws: &Workspace, name: &str, d: &doc::SquareCheck) -> Res<Check> {
    let (_, c, base) = ws.pointed(&d.pointed)?;
    let sq = square(&c, name, &d.square)?;
    let r = ctx(name, distinguished_square_check(&c, &base, &sq))?;
    let summary = vec![format!("distinguished: {}, {} faults", r.holds, r.faults.len())];
    Ok(Check::new(name, "square", Verdict::from_bool(r.holds), summary, &r))
}

fn coverings(ws: &Workspace, name: &str, layered: &LayeredCategory, names: &[String]) -> Res<Vec<CoveringAssignment>> {
    if names.len() != layered.num_levels() {
        return Err(err(name, format!("{} coverings for {} levels", names.len(), layered.num_levels())));
    }
    names
        .iter()
        .enumerate()
        .map(|(n, k)| {
            let (c, k) = ws.covering(k)?;
            if !Arc::ptr_eq(&c, &layered.levels()[n]) {
                return Err(err(name, format!("covering for level {n} is over a different category")));
            }
            Ok(k)
        })
        .collect()
}

pub fn powered(ws: &Workspace, name: &str, d: &doc::PoweredCheck) -> Res<Check> {
    let layered = ws.layered(&d.layered)?;
    let ks = coverings(ws, name, &layered, &d.coverings)?;
    let mut summary = Vec::new();
    let mut covers = Vec::new();
    let mut ok = true;
    let mut unverifiable = false;
    for l in &d.cover {
        let ladder = ws.ladder(&layered, name, l)?;
        let r = ctx(name, powered_cover_check(&layered, &ladder, &ks))?;
        summary.push(format!("ladder [{}] covering: {}", l.join(", "), r.covering));
        ok &= r.covering;
        covers.push(r);
    }
    let mut probes = Vec::new();
    if !d.family.is_empty() {
        let family = d.family.iter().map(|l| ws.ladder(&layered, name, l)).collect::<Res<Vec<_>>>()?;
        let target = layered.target_chain(&family[0]);
        let tests: Vec<LadderMorphism> = if d.tests.is_empty() {
            layered.ladders().into_iter().filter(|t| layered.target_chain(t) == target).collect()
        } else {
            d.tests.iter().map(|l| ws.ladder(&layered, name, l)).collect::<Res<_>>()?
        };
        let mut failures = 0;
        for t in &tests {
            let r = ctx(name, powered_stability_probe(&layered, &family, t, &ks))?;
            failures += (r.verdict == Verdict::Fail) as usize;
            unverifiable |= r.verdict == Verdict::Unverifiable;
            probes.push(r);
        }
        summary.push(format!("stability over {} test ladders: {failures} failures", tests.len()));
        ok &= failures == 0;
    }
    let verdict = if !ok {
        Verdict::Fail
    } else if unverifiable {
        Verdict::Unverifiable
    } else {
        Verdict::Pass
    };
    Ok(Check::new(name, "powered", verdict, summary, json!({ "cover": covers, "stability": probes })))
}

pub fn gamma(ws: &Workspace, name: &str, d: &doc::GammaCheck) -> Res<Check> {
    let (c, r) = ws.partition(&d.partition)?;
    let g = gamma_check(&c, &r);
    let mut summary = vec![format!("type Γ: {}", g.verdict)];
    if let Some([a, a2, b, b2]) = g.counterexample {
        let l = |x: ObjId| c.obj_label(x).to_string();
        summary.push(format!("{}∼{} and {}∼{} but their products are not related", l(a), l(a2), l(b), l(b2)));
    }
    Ok(Check::new(name, "gamma", g.verdict, summary, &g))
}

pub fn blurry(ws: &Workspace, name: &str, d: &doc::BlurryCheck) -> Res<Check> {
    let (c, k) = ws.covering(&d.covering)?;
    let (pc, r) = ws.partition(&d.partition)?;
    if !Arc::ptr_eq(&c, &pc) {
        return Err(err(name, "covering and partition are over different categories"));
    }
    let site = ctx(name, blurry_topology(c, &k, &r))?;
    let p = ctx(name, blurry_axiom_probe(&site))?;
    let verdict = if p.skipped.is_some() {
        Verdict::Skipped
    } else if p.all_pass() {
        Verdict::Pass
    } else if p.witnesses.is_empty() {
        Verdict::Unverifiable
    } else {
        Verdict::Fail
    };
    let mut summary = vec![format!(
        "iso: {}, stability: {}, transitivity: {}",
        p.iso_axiom, p.pullback_stability, p.transitivity
    )];
    summary.extend(p.skipped.clone());
    if let Some(w) = p.witnesses.first() {
        summary.push(match w {
            BlurryWitness::Iso { .. } => "witness: an isomorphism of classes is not covering".to_string(),
            BlurryWitness::Stability { .. } => "witness: a pulled-back class family is not covering".to_string(),
            BlurryWitness::Gap { .. } => "witness: refinement needs an uninhabited class morphism".to_string(),
            BlurryWitness::Transitivity { .. } => "witness: a refined class family is not covering".to_string(),
        });
    }
    Ok(Check::new(name, "blurry", verdict, summary, &p))
}

pub fn powered_blurry(ws: &Workspace, name: &str, d: &doc::PoweredBlurryCheck) -> Res<Check> {
    let layered = ws.layered(&d.layered)?;
    if d.levels.len() != layered.num_levels() {
        return Err(err(name, format!("{} levels for a {}-level category", d.levels.len(), layered.num_levels())));
    }
    let mut sites = Vec::new();
    for (n, lv) in d.levels.iter().enumerate() {
        let (c, k) = ws.covering(&lv.covering)?;
        let (pc, r) = ws.partition(&lv.partition)?;
        if !Arc::ptr_eq(&c, &pc) || !Arc::ptr_eq(&c, &layered.levels()[n]) {
            return Err(err(name, format!("level {n}: covering, partition and layer disagree on the category")));
        }
        sites.push(ctx(name, blurry_topology(c, &k, &r))?);
    }
    let loose: BTreeSet<usize> = d.loose.iter().copied().collect();
    let pb = ctx(name, powered_blurry_compose(&sites, &layered, &loose))?;
    let ladders: Vec<LadderMorphism> = if d.ladders.is_empty() {
        layered.ladders()
    } else {
        d.ladders.iter().map(|l| ws.ladder(&layered, name, l)).collect::<Res<_>>()?
    };
    let mut covering = 0;
    let mut rows = Vec::new();
    for l in &ladders {
        let cl = ctx(name, pb.classify(l))?;
        let r = ctx(name, pb.check(&cl))?;
        covering += r.covering as usize;
        rows.push(json!({ "ladder": l.arrows, "classes": cl.arrows, "covering": r.covering }));
    }
    let summary = vec![
        format!("{} levels composed, {} loose", layered.num_levels(), loose.len()),
        format!("{covering} of {} class ladders covering", ladders.len()),
    ];
    Ok(Check::new(name, "powered_blurry", Verdict::Pass, summary, json!({ "probes": pb.probes, "ladders": rows })))
}

pub fn sheaf(ws: &Workspace, name: &str, d: &doc::SheafCheck, opts: &Options) -> Res<Check> {
    let (c, k) = ws.covering(&d.covering)?;
    let list = presheaf_list(ws, name, &c, &d.presheaves, d.enumerate, opts)?;
    let mut rows = BTreeMap::new();
    let (mut sheaves, mut unverifiable) = (0, false);
    for (n, p) in &list {
        let r = ctx(name, sheaf_check(p, &c, &k))?;
        sheaves += r.is_sheaf() as usize;
        unverifiable |= r.verdict == Verdict::Unverifiable;
        rows.insert(n.clone(), r.verdict);
    }
    let named_fail = d.presheaves.iter().any(|n| rows[n] == Verdict::Fail);
    let verdict = if named_fail {
        Verdict::Fail
    } else if unverifiable {
        Verdict::Unverifiable
    } else {
        Verdict::Pass
    };
    let mut summary = vec![format!("{sheaves} of {} presheaves are sheaves", list.len())];
    summary.extend(d.presheaves.iter().map(|n| format!("{n}: {}", rows[n])));
    Ok(Check::new(name, "sheaf", verdict, summary, &rows))
}

pub fn additivity(ws: &Workspace, name: &str, d: &doc::AdditivityCheck) -> Res<Check> {
    let base = ws.category(&d.category)?;
    let objects = d.objects.iter().map(|z| ws.zobject(&base, &d.category, name, z)).collect::<Res<Vec<_>>>()?;
    let at = ws.zobject(&base, &d.category, name, &d.at)?;
    let mut all = objects;
    all.push(at.clone());
    if let Some(z) = &d.presheaf.representable {
        all.push(ws.zobject(&base, &d.category, name, z)?);
    }
    let lin = ctx(name, Linearization::new(&base, &summand_closure(&all)))?;
    let lc = &lin.category;
    let p = match (&d.presheaf.representable, &d.presheaf.constant) {
        (Some(z), None) => {
            let y = ws.zobject(&base, &d.category, name, z)?;
            representable(lc, lin.object_of(&y).expect("closure contains it"))
        }
        (None, Some(labels)) => {
            let labels: Vec<&str> = labels.iter().map(String::as_str).collect();
            Presheaf::constant(lc, &labels)
        }
        _ => return Err(err(name, "presheaf needs exactly one of `representable`, `constant`")),
    };
    let x = lin.object_of(&at).expect("closure contains it");
    let r = ctx(name, additivity_check(&p, &base, &lin, x))?;
    let summary = vec![format!("|F(X)| = {}, product over summands = {}, additive: {}", r.whole, r.product, r.holds)];
    Ok(Check::new(name, "additivity", Verdict::from_bool(r.holds), summary, &r))
}

pub fn squares_probe(ws: &Workspace, name: &str, d: &doc::SquaresProbeCheck, opts: &Options) -> Res<Check> {
    let (c, k) = ws.covering(&d.covering)?;
    let squares = d.squares.iter().map(|s| square(&c, name, s)).collect::<Res<Vec<_>>>()?;
    let list = presheaf_list(ws, name, &c, &d.presheaves, d.enumerate, opts)?;
    let mut disagree = Vec::new();
    let mut supported = true;
    for (n, p) in &list {
        let r = ctx(name, squares_vs_sheaf_probe(p, &c, &k, &squares, d.asserted))?;
        supported = r.assertion_supported;
        if !r.agree {
            disagree.push(n.clone());
        }
    }
    let mut summary = vec![format!("{} of {} presheaves disagree", disagree.len(), list.len())];
    if d.asserted {
        summary.push(format!("squares generate the covering: {supported}"));
    }
    let verdict = Verdict::from_bool(disagree.is_empty());
    Ok(Check::new(
        name,
        "squares_probe",
        verdict,
        summary,
        json!({ "checked": list.len(), "disagree": disagree, "asserted": d.asserted, "assertion_supported": supported }),
    ))
}

fn functor_json(f: &zcat_core::fincat::Functor) -> serde_json::Value {
    let (s, t) = (&*f.source, &*f.target);
    let objects: BTreeMap<&str, &str> = s.objects().map(|x| (s.obj_label(x), t.obj_label(f.on_object(x)))).collect();
    let morphisms: BTreeMap<&str, &str> =
        s.morphisms().map(|m| (s.mor_label(m), t.mor_label(f.on_morphism(m)))).collect();
    json!({ "objects": objects, "morphisms": morphisms })
}

pub fn parametrize(ws: &Workspace, name: &str, d: &doc::ParametrizeCheck, opts: &Options) -> Res<Check> {
    let m = ws.model(&d.model)?;
    let mut chain = Vec::new();
    for g in &d.precompose {
        chain.push(ws.functor(g)?);
    }
    let source = match chain.last() {
        Some(g) => g.target.clone(),
        None => ws.category(&d.source)?,
    };
    if !chain.is_empty() && !Arc::ptr_eq(&ws.category(&d.source)?, &source) {
        return Err(err(name, "the innermost functor must end at `source`"));
    }
    let mut family = ctx(name, enumerate_fes(source, m, opts.budget))?;
    let mut summary = vec![format!("{} full, essentially surjective functors", family.members.len())];
    for g in chain.iter().rev() {
        if !Arc::ptr_eq(&g.target, &family.source) {
            return Err(err(name, "precomposition chain does not compose"));
        }
        family = ctx(name, precompose(g, &family))?;
        summary.push(format!("after precomposition: {}", family.members.len()));
    }
    let mut verdict = Verdict::Pass;
    if let Some(n) = d.expect_count {
        if family.members.len() != n {
            verdict = Verdict::Fail;
            summary.push(format!("expected {n}"));
        }
    }
    let members: Vec<_> = family.members.iter().map(functor_json).collect();
    Ok(Check::new(name, "parametrize", verdict, summary, json!({ "members": members })))
}

pub fn model_check(ws: &Workspace, name: &str, d: &doc::ModelCheck) -> Res<Check> {
    let m = ws.model(&d.model)?;
    let options = ModelCheckOptions { lifting: d.lifting };
    let r = model_axiom_check(&m, options);
    let mut summary = vec![format!("axioms hold: {} ({} violations)", r.passes, r.violations.len())];
    let mut verdict = Verdict::from_bool(r.passes);
    let mut quotient = serde_json::Value::Null;
    let mut types = Vec::new();
    if let Some(p) = &d.quotient {
        let (pc, rel) = ws.partition(p)?;
        if !Arc::ptr_eq(&pc, &m.base) {
            return Err(err(name, "quotient partition is over a different category"));
        }
        for [a, b] in &d.class_types {
            let (x, y) = (obj(&pc, name, a)?, obj(&pc, name, b)?);
            let t = class_types(&m, &rel, (rel.block_of(x), rel.block_of(y)));
            let labels: Vec<String> = t.iter().map(|c| c.to_string()).collect();
            summary.push(format!("[{a}] → [{b}]: {{{}}}", labels.join(", ")));
            types.push(json!({ "from": a, "to": b, "types": labels }));
        }
        let q = ctx(name, quotient_model(&m, &rel, options))?;
        summary.push(format!("quotient axioms hold: {} ({} violations)", q.report.passes, q.report.violations.len()));
        if !q.report.passes {
            verdict = Verdict::Fail;
        }
        quotient = serde_json::to_value(&q.report).expect("serializable");
    } else if !d.class_types.is_empty() {
        return Err(err(name, "`class_types` needs a `quotient`"));
    }
    Ok(Check::new(name, "model_check", verdict, summary, json!({ "model": r, "quotient": quotient, "class_types": types })))
}

pub fn equivalence(ws: &Workspace, name: &str, d: &doc::EquivalenceCheck) -> Res<Check> {
    let (cat, c, fp) = ws.fingerprints(&d.fingerprints)?;
    let xs = d.objects.iter().map(|z| ws.zobject(&c, &cat, name, z)).collect::<Res<Vec<_>>>()?;
    let mut invariants = Vec::new();
    for x in &xs {
        let inv = ctx(name, invariant_of(&c, x, &fp))?;
        invariants.push(json!({ "object": x.display(&c), "parts": inv.parts, "positive": inv.fold_positive().dims() }));
    }
    let mut matrix = Vec::new();
    for x in &xs {
        let row = xs.iter().map(|y| ctx(name, z_equiv(&c, x, y, &fp))).collect::<Res<Vec<bool>>>()?;
        matrix.push(row);
    }
    let mut summary = Vec::new();
    let mut verdict = Verdict::Pass;
    for &(i, j, want) in &d.expect {
        let got = *matrix
            .get(i)
            .and_then(|r| r.get(j))
            .ok_or_else(|| err(name, format!("expectation index ({i}, {j}) is out of range")))?;
        summary.push(format!("{} ~ {}: {got}{}", xs[i].display(&c), xs[j].display(&c), if got == want { "" } else { " (unexpected)" }));
        if got != want {
            verdict = Verdict::Fail;
        }
    }
    Ok(Check::new(name, "equivalence", verdict, summary, json!({ "invariants": invariants, "equivalent": matrix })))
}

