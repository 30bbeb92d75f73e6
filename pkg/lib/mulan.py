""" Mulan (ARFF + XML label header) and MEKA ARFF readers and writers """
import csv
import logging
import re
import xml.etree.ElementTree as ET  # nosec
from typing import Any, Dict, List, Optional, Sequence, Tuple

import arff

from lib.exceptions import ArffParseError, LabelValueError, SchemaError
from lib.helpers import read_text
from lib.mldata import (
    FeatureSpec,
    FeatureValue,
    Instance,
    LabelSet,
    MultiLabelDataset,
)

MULAN_NAMESPACE = "http://mulan.sourceforge.net/labels"

# MEKA keeps the label count in the relation name, 'name: -C 22'
_RE_MEKA_LABELS = re.compile(r"(?:^|\s)-C\s+(-?\d+)")
_RE_SPARSE_ROW = re.compile(r"^\s*\{")

_MEMBER = {"1": True, "true": True, "0": False, "false": False}


def _data_lines(arff_text: str) -> Tuple[List[int], bool]:
    """returns the 1-based line number of every data row, and whether the
    data section uses sparse rows"""
    lines: List[int] = []
    sparse = False
    in_data = False
    for number, row in enumerate(arff_text.splitlines(), start=1):
        row = row.strip()
        if not row or row.startswith("%"):
            continue
        if not in_data:
            in_data = row.upper().startswith("@DATA")
            continue
        lines.append(number)
        if _RE_SPARSE_ROW.match(row):
            sparse = True
    return lines, sparse


def _decode(arff_text: str, sparse: bool) -> Dict[str, Any]:
    """decodes an ARFF document, sparse documents come back as dicts"""
    return_type = arff.LOD if sparse else arff.DENSE
    try:
        return arff.loads(arff_text, return_type=return_type)
    except arff.ArffException as err:
        raise ArffParseError(str(err), line=err.line) from err
    except (ValueError, IndexError) as err:
        raise ArffParseError(f"unreadable ARFF document: {err}") from err


def _feature_spec(attribute: Tuple[str, Any]) -> FeatureSpec:
    name, kind = attribute
    if isinstance(kind, (list, tuple)):
        return FeatureSpec(name, tuple(str(v) for v in kind))
    return FeatureSpec(name, str(kind))


def _sparse_default(spec: FeatureSpec) -> FeatureValue:
    # omitted values: 0 for numbers, the first declared value for nominals
    if spec.is_nominal:
        return spec.kind[0]
    if spec.kind == "STRING":
        return ""
    if spec.kind == "INTEGER":
        return 0
    return 0.0


def _is_member(value: Any, label: str, line: Optional[int]) -> bool:
    if isinstance(value, str):
        token = value.strip().lower()
        if token in _MEMBER:
            return _MEMBER[token]
    elif isinstance(value, (int, float)) and value in (0, 1):
        return bool(value)
    raise LabelValueError(
        f"label {label} has value {value!r}, expected 0/1/true/false", line
    )


def _build(
    doc: Dict[str, Any],
    name: str,
    label_positions: Sequence[int],
    lines: Sequence[int],
) -> MultiLabelDataset:
    """splits the decoded attributes into labels and features"""
    attributes = doc["attributes"]
    labels = set(label_positions)
    feature_positions = [i for i in range(len(attributes)) if i not in labels]
    schema = tuple(_feature_spec(attributes[i]) for i in feature_positions)
    label_names = tuple(attributes[i][0] for i in label_positions)
    q = len(label_names)

    defaults: Dict[int, FeatureValue] = {
        p: _sparse_default(spec)
        for p, spec in zip(feature_positions, schema)
    }
    # omitted labels in a sparse row mean "absent"
    defaults.update({p: "0" for p in label_positions})

    instances: List[Instance] = []
    missing = 0
    for i, row in enumerate(doc["data"]):
        line = lines[i] if i < len(lines) else None
        if isinstance(row, dict):
            values = [row.get(p, defaults[p]) for p in range(len(attributes))]
        else:
            values = list(row)
        members = [
            j
            for j, p in enumerate(label_positions)
            if _is_member(values[p], label_names[j], line)
        ]
        features = tuple(values[p] for p in feature_positions)
        missing += sum(1 for v in features if v is None)
        instances.append(Instance(features, LabelSet.of(members, q)))

    if not instances:
        raise ArffParseError(f"{name}: no data rows found")
    if missing:
        logging.warning(f"{name}: {missing} missing feature value(s) kept")

    dataset = MultiLabelDataset(
        name=name,
        instances=tuple(instances),
        label_names=label_names,
        feature_schema=schema,
    )
    logging.info(
        f"{name}: loaded {dataset.n} instances, {dataset.m} features, "
        + f"{dataset.q} labels"
    )
    return dataset


def read_label_names(xml_text: str) -> List[str]:
    """returns the label names declared in a Mulan XML header, in order"""
    try:
        root = ET.fromstring(xml_text)  # nosec
    except ET.ParseError as err:
        raise SchemaError(f"malformed label header: {err}") from err

    names: List[str] = []
    # hierarchical headers nest <label> elements, document order is kept
    for element in root.iter():
        if element is root or element.tag.rsplit("}", 1)[-1] != "label":
            continue
        if "name" not in element.attrib:
            raise SchemaError("label header has a <label> without a name")
        names.append(element.attrib["name"])

    if not names:
        raise SchemaError("label header declares no labels")
    duplicates = sorted({n for n in names if names.count(n) > 1})
    if duplicates:
        raise SchemaError(f"label header repeats {', '.join(duplicates)}")
    return names


def meka_label_count(relation: str) -> Optional[int]:
    """returns the -C value of a MEKA relation name, None if absent"""
    matches = _RE_MEKA_LABELS.search(relation)
    if matches:
        return int(matches.group(1))
    return None


def _meka_name(relation: str) -> str:
    return relation.split(":", 1)[0].strip() or relation


def _header_text(arff_text: str) -> str:
    """everything up to and including the @DATA line"""
    rows = arff_text.splitlines()
    for i, row in enumerate(rows):
        if row.strip().upper().startswith("@DATA"):
            return "\n".join(rows[: i + 1])
    return arff_text


def _locate(
    header: Dict[str, Any], label_names: Optional[Sequence[str]], meka: bool
) -> Tuple[List[int], str]:
    """returns the label attribute positions and the default dataset name"""
    relation: str = header["relation"]
    attributes = header["attributes"]
    if label_names is not None and not meka:
        positions = {attr[0]: i for i, attr in enumerate(attributes)}
        absent = [label for label in label_names if label not in positions]
        if absent:
            raise SchemaError(
                "label(s) missing from the ARFF attributes: "
                + ", ".join(absent)
            )
        logging.debug(
            f"{relation}: {len(attributes)} attributes, "
            + f"{len(label_names)} labels"
        )
        return [positions[label] for label in label_names], relation

    count = meka_label_count(relation)
    total = len(attributes)
    if count is None:
        if meka:
            raise SchemaError(
                f"relation '{relation}' carries no -C label count"
            )
        raise SchemaError(
            f"relation '{relation}' has no -C token and no label header "
            + "was given"
        )
    if count == 0 or abs(count) > total:
        raise SchemaError(
            f"relation '{relation}' declares {count} labels "
            + f"for {total} attributes"
        )
    # a positive count puts the labels first, a negative one last
    if count > 0:
        return list(range(count)), _meka_name(relation)
    return list(range(total + count, total)), _meka_name(relation)


def _row_tokens(row: str) -> Dict[int, str]:
    """raw values of one data row keyed by attribute position"""
    row = row.strip()
    sparse = bool(_RE_SPARSE_ROW.match(row))
    if sparse:
        row = row.strip("{}")
    fields = next(csv.reader([row], quotechar="'", skipinitialspace=True))
    if not sparse:
        return {i: value.strip() for i, value in enumerate(fields)}
    tokens: Dict[int, str] = {}
    for field_ in fields:
        parts = field_.split(None, 1)
        if len(parts) == 2 and parts[0].isdigit():
            tokens[int(parts[0])] = parts[1].strip().strip("'\"")
    return tokens


def _check_label_row(
    arff_text: str,
    line: int,
    attributes: Sequence[Tuple[str, Any]],
    label_positions: Sequence[int],
) -> None:
    """raises LabelValueError when a nominal label of the row at line holds
    an undeclared value"""
    rows = arff_text.splitlines()
    if not 0 < line <= len(rows):
        return
    tokens = _row_tokens(rows[line - 1])
    for p in label_positions:
        label, declared = attributes[p]
        token = tokens.get(p)
        if isinstance(declared, list) and token and token not in declared:
            raise LabelValueError(
                f"label {label} has value {token!r}, expected 0/1/true/false",
                line,
            )


def parse_dataset(
    arff_text: str,
    xml_text: Optional[str] = None,
    meka: bool = False,
    name: Optional[str] = None,
) -> MultiLabelDataset:
    """parses either format: Mulan when a label header is given, MEKA when
    asked to or when the relation name carries a -C token"""
    label_names = None
    if xml_text is not None and not meka:
        label_names = read_label_names(xml_text)
    lines, sparse = _data_lines(arff_text)
    header = _decode(_header_text(arff_text), sparse=False)
    positions, default_name = _locate(header, label_names, meka)
    try:
        doc = _decode(arff_text, sparse)
    except ArffParseError as err:
        if isinstance(err.__cause__, arff.BadNominalValue) and err.line:
            _check_label_row(
                arff_text, err.line, header["attributes"], positions
            )
        raise
    return _build(doc, name or default_name, positions, lines)


def parse_mulan(
    arff_text: str, xml_text: str, name: Optional[str] = None
) -> MultiLabelDataset:
    """parses a Mulan dataset: ARFF rows plus an XML label header"""
    return parse_dataset(arff_text, xml_text, name=name)


def parse_meka(
    arff_text: str, name: Optional[str] = None
) -> MultiLabelDataset:
    """parses a MEKA dataset, the label count lives in the relation name"""
    return parse_dataset(arff_text, meka=True, name=name)


def load_dataset(
    arff_path: str,
    xml_path: Optional[str] = None,
    meka: bool = False,
    name: Optional[str] = None,
) -> MultiLabelDataset:
    """reads a dataset from disk"""
    arff_text = read_text(arff_path)
    xml_text = read_text(xml_path) if xml_path else None
    logging.debug(f"loading {arff_path} (labels: {xml_path or 'relation'})")
    return parse_dataset(arff_text, xml_text, meka=meka, name=name)


def _attribute(spec: FeatureSpec) -> Tuple[str, Any]:
    if spec.is_nominal:
        return (spec.name, list(spec.kind))
    return (spec.name, spec.kind)


def _label_values(labels: LabelSet) -> List[str]:
    return ["1" if j in labels else "0" for j in range(labels.q)]


def label_header(label_names: Sequence[str]) -> str:
    """returns a Mulan XML label header"""
    root = ET.Element("labels", xmlns=MULAN_NAMESPACE)
    for label in label_names:
        ET.SubElement(root, "label", name=label)
    ET.indent(root)
    return (
        '<?xml version="1.0" encoding="utf-8"?>\n'
        + ET.tostring(root, encoding="unicode")
        + "\n"
    )


def serialize_mulan(d: MultiLabelDataset) -> Tuple[str, str]:
    """returns the canonical (ARFF, XML) text of a dataset: dense rows,
    features first and labels last"""
    attributes = [_attribute(spec) for spec in d.feature_schema] + [
        (label, ["0", "1"]) for label in d.label_names
    ]
    data = [
        list(inst.features) + _label_values(inst.labels)
        for inst in d.instances
    ]
    arff_text = arff.dumps(
        {"relation": d.name, "attributes": attributes, "data": data}
    )
    return arff_text + "\n", label_header(d.label_names)


def serialize_meka(d: MultiLabelDataset) -> str:
    """returns the canonical MEKA ARFF text: labels first, -C q"""
    attributes = [(label, ["0", "1"]) for label in d.label_names] + [
        _attribute(spec) for spec in d.feature_schema
    ]
    data = [
        _label_values(inst.labels) + list(inst.features)
        for inst in d.instances
    ]
    return (
        arff.dumps(
            {
                "relation": f"{d.name}: -C {d.q}",
                "attributes": attributes,
                "data": data,
            }
        )
        + "\n"
    )
