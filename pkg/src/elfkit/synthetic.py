"""Synthetic LEI-style data for demos and self-contained tests.

Generates a golden-copy CSV and a matching code-list CSV for three
fictional-but-plausible jurisdiction datasets (EE, LI, PL) whose class
mixtures, naming conventions and noise levels imitate the real thing:
legal forms appear as abbreviations, dotted abbreviations, full words at
either end of the name, or not at all; a slice of rows is out of scope
(lapsed/inactive) and a small slice is malformed. A "wide" profile with
many small jurisdictions exists for exercising top-N selection logic.

Everything is a pure function of the seed.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np

__all__ = [
    "FormProfile",
    "JurisdictionProfile",
    "demo_profiles",
    "wide_profiles",
    "generate_names",
    "write_synthetic_world",
]

# ---------------------------------------------------------------- word pools

_WORDS_ET = (
    "põhja lõuna ida lääne kesk uus vana suur väike kuld hõbe metsa mere järve "
    "jõe saare linna valla kivi puu raua ehitus kaubandus teenused transport "
    "logistika kinnisvara investeeringud haldus arendus tehnika energia päikese "
    "tuule vee soojus toidu pagari piima liha kala vilja seemne aia lille talu "
    "farmi looma linnu mee käsitöö disaini stuudio büroo õigus meditsiini "
    "hambaravi apteegi kooli spordi matka reisi hotelli restorani kohviku kino "
    "teatri muusika kunsti foto video tarkvara riistvara side turva puhastus "
    "remondi montaaži paigalduse"
).split()

_PLACES_ET = (
    "tallinna tartu narva pärnu viljandi rakvere kuressaare võru valga haapsalu "
    "jõhvi keila paide türi elva põlva rapla jõgeva kärdla otepää"
).split()

_SURNAMES_ET = (
    "tamm saar sepp mägi kask kukk rebane ilves kuusk pärn lepp koppel luik "
    "orav siim raud teder vaher allik laine"
).split()

_WORDS_DE = (
    "alpen berg tal see rhein industrie handel bau finanz vermögens kapital "
    "immobilien beteiligungs holding metall präzisions uhren technik energie "
    "solar consulting treuhand verwaltungs service logistik transport pharma "
    "medizin labor optik elektro software media druck textil möbel garten hotel "
    "gastro anlage global swiss euro atlantik pazifik krypto digital data"
).split()

_PLACES_LI = "vaduz schaan balzers triesen eschen mauren ruggell gamprin planken schellenberg".split()

_SURNAMES_DE = (
    "müller meier schmidt frick beck marxer büchel hasler kaufmann wanger "
    "ospelt kindle negele banzer vogt walser hilti matt gassner frommelt"
).split()

_WORDS_PL = (
    "polski handel produkcja usługi budownictwo transport logistyka "
    "nieruchomości inwestycje rozwój energia stal metal drewno meble tekstyl "
    "odzież żywność piekarnia mleczarnia mięso zboże ogród kwiat gospodarstwo "
    "rolne hodowla miód rzemiosło projekt studio biuro konsulting księgowość "
    "prawo medycyna stomatologia apteka szkoła sport turystyka hotel "
    "restauracja kawiarnia kino teatr muzyka sztuka foto wideo informatyka "
    "oprogramowanie sprzęt sieć ochrona sprzątanie remont montaż instalacja"
).split()

_PLACES_PL = (
    "warszawa kraków łódź wrocław poznań gdańsk szczecin bydgoszcz lublin "
    "białystok katowice gdynia częstochowa radom toruń kielce rzeszów gliwice "
    "zabrze olsztyn"
).split()

_SURNAMES_PL = (
    "kowalski nowak wiśniewski wójcik kowalczyk kamiński lewandowski zieliński "
    "szymański woźniak dąbrowski kozłowski jankowski mazur krawczyk"
).split()

_POOLS = {
    "et": (_WORDS_ET, _PLACES_ET, _SURNAMES_ET),
    "de": (_WORDS_DE, _PLACES_LI, _SURNAMES_DE),
    "pl": (_WORDS_PL, _PLACES_PL, _SURNAMES_PL),
    "xx": (
        "alpha beta gamma delta omega nova terra aqua ignis ventus solaris "
        "lunar astra polar borealis meridian zenith apex vertex axiom".split(),
        "north south east west central".split(),
        "smith jones brown wilson taylor".split(),
    ),
}


@dataclass(frozen=True)
class FormProfile:
    """One legal form: its code, registry names, and naming conventions.

    ``patterns`` maps a relative weight to a name template; ``{core}``
    is replaced by a generated core name. An empty-suffix template
    ("{core}") yields names that carry no form information at all.
    """

    code: str
    local_name: str
    abbreviations: tuple[str, ...]
    weight: float
    patterns: tuple[tuple[float, str], ...]
    core_pool: str = "words"  # "words" or "persons"


@dataclass(frozen=True)
class JurisdictionProfile:
    jurisdiction: str
    language: str
    n_entities: int
    forms: tuple[FormProfile, ...]
    upper_fraction: float = 0.12
    quote_fraction: float = 0.0


def _ee_forms() -> tuple[FormProfile, ...]:
    return (
        FormProfile("Q8F5", "osaühing", ("OÜ",), 0.586, (
            (0.62, "{core} OÜ"), (0.18, "OÜ {core}"), (0.09, "{core} osaühing"),
            (0.06, "Osaühing {core}"), (0.04, "{core} ou"), (0.01, "{core}"),
        )),
        FormProfile("AS2K", "aktsiaselts", ("AS",), 0.105, (
            (0.52, "{core} AS"), (0.3, "AS {core}"), (0.13, "{core} aktsiaselts"),
            (0.04, "Aktsiaselts {core}"), (0.01, "{core}"),
        )),
        FormProfile("MT3U", "mittetulundusühing", ("MTÜ",), 0.115, (
            (0.45, "MTÜ {core}"), (0.3, "{core} MTÜ"),
            (0.238, "Mittetulundusühing {core}"), (0.012, "{core}"),
        )),
        FormProfile("KY7A", "korteriühistu", ("KÜ",), 0.08, (
            (0.75, "Korteriühistu {core}"), (0.2, "KÜ {core}"), (0.05, "{core} korteriühistu"),
        )),
        FormProfile("SA9T", "sihtasutus", ("SA",), 0.03, (
            (0.55, "Sihtasutus {core}"), (0.25, "{core} Sihtasutus"),
            (0.17, "SA {core}"), (0.03, "{core}"),
        )),
        FormProfile("TU2H", "tulundusühistu", ("TÜH",), 0.012, (
            (0.6, "{core} tulundusühistu"), (0.35, "Tulundusühistu {core}"), (0.05, "{core}"),
        )),
        FormProfile("UU4S", "usaldusühing", ("UÜ",), 0.011, (
            (0.6, "{core} UÜ"), (0.3, "{core} usaldusühing"), (0.1, "{core}"),
        )),
        FormProfile("TY6I", "täisühing", ("TÜ",), 0.009, (
            (0.55, "{core} TÜ"), (0.35, "{core} täisühing"), (0.1, "{core}"),
        )),
        FormProfile("FE1K", "füüsilisest isikust ettevõtja", ("FIE",), 0.02, (
            (0.6, "{core} FIE"), (0.3, "FIE {core}"), (0.1, "{core}"),
        ), core_pool="persons"),
        FormProfile("RA5G", "riigiasutus", (), 0.015, (
            (0.3, "{place} maavalitsus"), (0.35, "{core} ministeerium"),
            (0.35, "{core} inspektsioon"),
        )),
        FormProfile("VF8L", "välismaa äriühingu filiaal", (), 0.008, (
            (0.8, "{core} Eesti filiaal"), (0.2, "{core} filiaal"),
        )),
        FormProfile("ER3D", "erakond", (), 0.005, (
            (0.8, "Erakond {core}"), (0.2, "{core} erakond"),
        )),
        FormProfile("8888", "", (), 0.004, (
            (0.3, "{core} OÜ"), (0.15, "{core} AS"), (0.15, "{core} ühing"),
            (0.4, "{core}"),
        )),
    )


def _li_forms() -> tuple[FormProfile, ...]:
    return (
        FormProfile("AGL7", "Aktiengesellschaft", ("AG",), 0.347, (
            (0.6, "{core} AG"), (0.2, "{core} Aktiengesellschaft"),
            (0.122, "{core} (Aktiengesellschaft)"), (0.07, "{core} SA"), (0.008, "{core}"),
        )),
        FormProfile("ANS2", "Anstalt", ("Anst.",), 0.175, (
            (0.53, "{core} Anstalt"), (0.26, "{core} Establishment"),
            (0.17, "{core} Est."), (0.04, "{core}"),
        )),
        FormProfile("STF4", "Stiftung", (), 0.165, (
            (0.46, "{core} Stiftung"), (0.23, "Stiftung {core}"),
            (0.27, "{core} Foundation"), (0.04, "{core}"),
        )),
        FormProfile("GMB9", "Gesellschaft mit beschränkter Haftung", ("GmbH",), 0.075, (
            (0.68, "{core} GmbH"), (0.15, "{core} G.m.b.H."),
            (0.12, "{core} Gesellschaft mit beschränkter Haftung"), (0.05, "{core}"),
        )),
        FormProfile("TRU6", "Treuunternehmen", ("Trust reg.",), 0.06, (
            (0.56, "{core} Trust reg."), (0.26, "{core} Treuunternehmen"),
            (0.14, "{core} Trust"), (0.04, "{core}"),
        )),
        FormProfile("VRN3", "Verein", ("e.V.",), 0.03, (
            (0.3, "{core} e.V."), (0.29, "Verein {core}"),
            (0.23, "{core} Verein"), (0.18, "{core}"),
        )),
        FormProfile("EZU8", "Einzelunternehmen", (), 0.015, (
            (0.12, "{core} Einzelunternehmen"), (0.88, "{core}"),
        ), core_pool="persons"),
        FormProfile("KLG5", "Kollektivgesellschaft", (), 0.02, (
            (0.4, "{core} & Co."), (0.34, "{core} Kollektivgesellschaft"), (0.26, "{core}"),
        ), core_pool="persons"),
        FormProfile("KGL1", "Kommanditgesellschaft", ("KG",), 0.02, (
            (0.58, "{core} KG"), (0.34, "{core} Kommanditgesellschaft"), (0.08, "{core}"),
        )),
        FormProfile("GST7", "gemeinnützige Stiftung", (), 0.02, (
            (0.5, "{core} gemeinnützige Stiftung"), (0.44, "{core} Stiftung"), (0.06, "{core}"),
        )),
        FormProfile("ZWN4", "Zweigniederlassung", (), 0.025, (
            (0.5, "{core} AG Zweigniederlassung {place}"), (0.25, "{core} Branch"),
            (0.25, "{core}"),
        )),
        FormProfile("GEN6", "Genossenschaft", ("eG",), 0.028, (
            (0.5, "{core} eG"), (0.4, "Genossenschaft {core}"), (0.1, "{core}"),
        )),
        FormProfile("8888", "", (), 0.02, (
            (0.25, "{core} AG"), (0.15, "{core} Anstalt"), (0.1, "{core} Reg."),
            (0.5, "{core}"),
        )),
    )


def _pl_forms() -> tuple[FormProfile, ...]:
    majors = (
        FormProfile("SPZ1", "spółka z ograniczoną odpowiedzialnością", ("sp. z o.o.",), 0.452, (
            (0.56, "{core} sp. z o.o."), (0.22, "{core} Sp. z o. o."),
            (0.16, "{core} spółka z ograniczoną odpowiedzialnością"),
            (0.06, "{core} spółka z o.o."),
        )),
        FormProfile("SAK2", "spółka akcyjna", ("S.A.",), 0.11, (
            (0.55, "{core} S.A."), (0.25, "{core} SA"),
            (0.19, "{core} spółka akcyjna"), (0.01, "{core}"),
        )),
        FormProfile("SPJ3", "spółka jawna", ("sp.j.",), 0.05, (
            (0.5, "{core} sp.j."), (0.3, "{core} spółka jawna"),
            (0.19, "{core} sp. j."), (0.01, "{core}"),
        )),
        FormProfile("SPK4", "spółka komandytowa", ("sp.k.",), 0.06, (
            (0.42, "{core} sp.k."), (0.25, "{core} spółka komandytowa"),
            (0.15, "{core} sp. k."), (0.17, "{core} sp. z o.o. sp.k."),
            (0.01, "{core}"),
        )),
        FormProfile("SKA5", "spółka komandytowo-akcyjna", ("S.K.A.",), 0.012, (
            (0.6, "{core} S.K.A."), (0.4, "{core} spółka komandytowo-akcyjna"),
        )),
        FormProfile("FUN6", "fundacja", (), 0.085, (
            (0.77, "Fundacja {core}"), (0.21, "{core} fundacja"), (0.02, "{core}"),
        )),
        FormProfile("STW7", "stowarzyszenie", (), 0.075, (
            (0.72, "Stowarzyszenie {core}"), (0.26, "{core} stowarzyszenie"), (0.02, "{core}"),
        )),
        FormProfile("SPM8", "spółdzielnia", (), 0.05, (
            (0.6, "Spółdzielnia Mieszkaniowa {core}"), (0.3, "Spółdzielnia {core}"),
            (0.1, "{core} spółdzielnia"),
        )),
        FormProfile("WSM9", "wspólnota mieszkaniowa", (), 0.03, (
            (0.85, "Wspólnota Mieszkaniowa {core} {number}"), (0.15, "Wspólnota {core}"),
        )),
        FormProfile("8888", "", (), 0.006, (
            (0.25, "{core} sp. z o.o."), (0.15, "{core} S.A."), (0.6, "{core}"),
        )),
    )
    tail_specs = [
        ("PP1A", "przedsiębiorstwo państwowe", "Przedsiębiorstwo Państwowe {core}"),
        ("UC2B", "uczelnia", "Wyższa Szkoła {core}"),
        ("PAR3", "parafia", "Parafia Rzymskokatolicka {core}"),
        ("GM4C", "gmina", "Gmina {place}"),
        ("PW5D", "powiat", "Powiat {place}"),
        ("BS6E", "bank spółdzielczy", "Bank Spółdzielczy w {place}"),
        ("ZOZ7", "samodzielny publiczny zakład opieki zdrowotnej", "SP ZOZ {place}"),
        ("KL8F", "koło łowieckie", "Koło Łowieckie {core}"),
        ("OSP9", "ochotnicza straż pożarna", "Ochotnicza Straż Pożarna {place}"),
        ("IG1G", "izba gospodarcza", "Izba Gospodarcza {core}"),
        ("ZZ2H", "związek zawodowy", "Związek Zawodowy {core}"),
        ("SR3I", "spółdzielnia rolnicza", "Rolnicza Spółdzielnia Produkcyjna {core}"),
        ("TW4J", "towarzystwo ubezpieczeń wzajemnych", "Towarzystwo Ubezpieczeń Wzajemnych {core}"),
        ("IN5K", "instytut badawczy", "Instytut Badawczy {core}"),
        ("FD6L", "federacja", "Federacja {core}"),
        ("KM7M", "kancelaria notarialna", "Kancelaria Notarialna {core}"),
        ("SZ8N", "szpital", "Szpital Wojewódzki w {place}"),
        ("MZ9O", "muzeum", "Muzeum {core}"),
        ("BB1P", "biblioteka", "Biblioteka Publiczna w {place}"),
        ("TS2Q", "teatr samorządowy", "Teatr {core}"),
        ("AG3R", "agencja wykonawcza", "Agencja Wykonawcza {core}"),
        ("NF4S", "narodowy fundusz", "Narodowy Fundusz {core}"),
        ("PT5T", "partia polityczna", "Partia {core}"),
        ("WZ6U", "wspólnota gruntowa", "Wspólnota Gruntowa {place}"),
        ("CH7V", "cech rzemiosł", "Cech Rzemiosł Różnych w {place}"),
        ("SK8W", "skarb państwa", "Skarb Państwa {core}"),
    ]
    tail_weight = (1.0 - sum(f.weight for f in majors)) / len(tail_specs)
    tail = tuple(
        FormProfile(code, name, (), tail_weight, ((0.97, template), (0.03, "{core}")))
        for code, name, template in tail_specs
    )
    return majors + tail


def demo_profiles(scale: float = 1.0) -> dict[str, JurisdictionProfile]:
    """EE/LI/PL-shaped datasets; ``scale`` shrinks them for quick tests."""
    size = lambda n: max(60, int(round(n * scale)))
    return {
        "EE": JurisdictionProfile("EE", "et", size(13824), _ee_forms(), upper_fraction=0.08),
        "LI": JurisdictionProfile("LI", "de", size(9458), _li_forms(), upper_fraction=0.12),
        "PL": JurisdictionProfile(
            "PL", "pl", size(20173), _pl_forms(), upper_fraction=0.18, quote_fraction=0.12
        ),
    }


def wide_profiles(n_jurisdictions: int = 34, base_size: int = 40) -> dict[str, JurisdictionProfile]:
    """Many small jurisdictions with strictly descending sizes.

    Includes CN (largest, so default exclusions visibly bite), CA and a
    CA sub-jurisdiction.
    """
    generic = lambda jur_tag: (
        FormProfile(f"{jur_tag}1A", "generic company", ("GC",), 0.7, ((1.0, "{core} GC"),)),
        FormProfile(f"{jur_tag}2B", "generic partnership", ("GP",), 0.3, ((1.0, "{core} GP"),)),
    )
    profiles: dict[str, JurisdictionProfile] = {}
    names = ["CN", "CA", "CA-QC"] + [
        f"{a}{b}" for a in "ABDEFGHIJKLMNOPQRSTUVW" for b in "ABC"
    ]
    for rank, jur in enumerate(names[:n_jurisdictions]):
        tag = chr(65 + rank // 26) + chr(65 + rank % 26)  # unique per jurisdiction
        profiles[jur] = JurisdictionProfile(
            jurisdiction=jur,
            language="xx",
            n_entities=base_size * (n_jurisdictions - rank) + 7,
            forms=generic(tag),
        )
    return profiles


# ------------------------------------------------------------- name assembly

def _make_core(rng: np.random.Generator, language: str, pool: str) -> str:
    words, places, surnames = _POOLS[language]
    if pool == "persons":
        parts = [str(rng.choice(surnames))]
        if rng.random() < 0.5:
            parts.append(str(rng.choice(surnames)))
    else:
        parts = [str(rng.choice(words))]
        if rng.random() < 0.55:
            parts.append(str(rng.choice(words)))
        if rng.random() < 0.25:
            parts.append(str(rng.choice(places)))
    if rng.random() < 0.06:
        parts.append(str(rng.integers(1, 99)))
    return " ".join(p.capitalize() for p in parts)


def generate_names(rng: np.random.Generator, profile: JurisdictionProfile) -> list[tuple[str, str]]:
    """(legal_name, elf_code) pairs for one jurisdiction profile."""
    _, places, _ = _POOLS[profile.language]
    weights = np.array([f.weight for f in profile.forms])
    weights = weights / weights.sum()
    counts = np.floor(weights * profile.n_entities).astype(int)
    counts[int(np.argmax(counts))] += profile.n_entities - counts.sum()

    out: list[tuple[str, str]] = []
    for form, count in zip(profile.forms, counts):
        pattern_weights = np.array([w for w, _ in form.patterns])
        pattern_weights = pattern_weights / pattern_weights.sum()
        templates = [t for _, t in form.patterns]
        picks = rng.choice(len(templates), size=count, p=pattern_weights)
        for pick in picks:
            core = _make_core(rng, profile.language, form.core_pool)
            if profile.quote_fraction and rng.random() < profile.quote_fraction:
                head, _, rest = core.partition(" ")
                core = f'"{head}"' + (f" {rest}" if rest else "")
            name = templates[pick].format(
                core=core,
                place=str(rng.choice(places)).capitalize(),
                number=int(rng.integers(1, 120)),
            )
            if rng.random() < profile.upper_fraction:
                name = name.upper()
            out.append((name, form.code))
    return out


# ---------------------------------------------------------------- CSV output

_ELF_LIST_HEADER = [
    "ELF Code",
    "Country Code (ISO 3166-1)",
    "Country sub-division code (ISO 3166-2)",
    "Entity Legal Form name Local name",
    "Language",
    "Abbreviations Local language",
    "ELF Status ACTV/INAC",
]

_GOLDEN_HEADER = [
    "LEI",
    "Entity.LegalName",
    "Entity.LegalJurisdiction",
    "Entity.LegalForm.EntityLegalFormCode",
    "Entity.EntityStatus",
    "Registration.RegistrationStatus",
]

_LANG_NAME = {"et": "Estonian", "de": "German", "pl": "Polish", "xx": "English"}

_OUT_OF_SCOPE = (
    ("ACTIVE", "LAPSED"),
    ("INACTIVE", "ISSUED"),
    ("NULL", "ISSUED"),
    ("INACTIVE", "RETIRED"),
)


def _make_lei(rng: np.random.Generator, counter: int) -> str:
    alphabet = "0123456789ABCDEFGHIJKLMNOPQRSTUVWXYZ"
    body = "".join(alphabet[i] for i in rng.integers(0, 36, size=10))
    return f"5493{body}{counter:06d}"[:20]


def write_synthetic_world(
    out_dir: str | Path,
    seed: int = 20220914,
    profile: str = "demo",
    scale: float = 1.0,
    include_junk: bool = True,
    out_of_scope_fraction: float = 0.15,
    snapshot_id: str = "2022-09-14",
) -> dict[str, Path]:
    """Write ``elf-list.csv`` and ``golden-copy-<date>.csv``; returns paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(seed)
    profiles = demo_profiles(scale) if profile == "demo" else wide_profiles()

    elf_list_path = out_dir / "elf-list.csv"
    with open(elf_list_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_ELF_LIST_HEADER)
        for jur_profile in profiles.values():
            country, _, subdivision = jur_profile.jurisdiction.partition("-")
            for form in jur_profile.forms:
                if form.code == "8888":
                    continue
                writer.writerow(
                    [
                        form.code,
                        country,
                        jur_profile.jurisdiction if subdivision else "",
                        form.local_name,
                        _LANG_NAME[jur_profile.language],
                        ";".join(form.abbreviations),
                        "ACTV",
                    ]
                )

    golden_path = out_dir / f"golden-copy-{snapshot_id.replace('-', '')}.csv"
    counter = 0
    with open(golden_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(_GOLDEN_HEADER)
        for jur_profile in profiles.values():
            # Exactly n_entities rows survive the scope filter; the
            # out-of-scope slice comes on top of them.
            for name, code in generate_names(rng, jur_profile):
                counter += 1
                writer.writerow(
                    [_make_lei(rng, counter), name, jur_profile.jurisdiction, code,
                     "ACTIVE", "ISSUED"]
                )
            extra = replace(
                jur_profile,
                n_entities=int(round(jur_profile.n_entities * out_of_scope_fraction)),
            )
            for name, code in generate_names(rng, extra):
                counter += 1
                entity_status, registration_status = _OUT_OF_SCOPE[
                    int(rng.integers(len(_OUT_OF_SCOPE)))
                ]
                writer.writerow(
                    [_make_lei(rng, counter), name, jur_profile.jurisdiction, code,
                     entity_status, registration_status]
                )
            if include_junk:
                junk = [
                    ["BAD", "Junk Entity GC", jur_profile.jurisdiction, "AAAA", "ACTIVE", "ISSUED"],
                    [_make_lei(rng, 900000 + counter), "", jur_profile.jurisdiction, "AAAA", "ACTIVE", "ISSUED"],
                    [_make_lei(rng, 910000 + counter), "Three Letter Code GC", jur_profile.jurisdiction, "AB1", "ACTIVE", "ISSUED"],
                    [_make_lei(rng, 920000 + counter), "Odd Jurisdiction GC", "X-99Z", "AAAA", "ACTIVE", "ISSUED"],
                ]
                writer.writerows(junk)

    return {"elf_list": elf_list_path, "golden_copy": golden_path}
