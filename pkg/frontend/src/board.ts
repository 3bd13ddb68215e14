// Pure view-model: payload in, renderable description out. Everything the
// page shows is derived here so the scripted tests can assert on it without
// touching the DOM. No game logic lives on the client beyond mirroring
// legal_moves for pre-filtering.

import {
  Arena,
  PolygonWire,
  Role,
  SessionPayload,
} from "./types.js";

export interface SlotCard {
  index: number;
  label: string; // "a_0"
  value: string; // verbatim server string, or "unset"
  open: boolean;
  zeroExcluded: boolean;
}

export interface SketchPoint {
  x: number;
  y: number;
  label: string; // verbatim order string
}

export interface PolygonSketch {
  width: number;
  height: number;
  points: SketchPoint[];
  vertices: SketchPoint[];
  path: string; // SVG polyline "x,y x,y ..." along the lower hull
}

export interface ResultPanel {
  winner: Role;
  headline: string;
  witnesses: string[]; // root list, verbatim decimal strings
  detail: string; // "no roots mod 9" / certificate detail with order annotation
  rootFound: string | null; // valued witness, if any
}

export interface BoardView {
  arenaLabel: string;
  banner: string;
  humanRole: Role;
  humanToMove: boolean;
  finished: boolean;
  slots: SlotCard[];
  moveLog: string[];
  polygon: PolygonSketch | null;
  result: ResultPanel | null;
}

export function otherRole(role: Role): Role {
  return role === "nora" ? "wanda" : "nora";
}

export function arenaLabel(arena: Arena): string {
  if (arena.kind === "cyclic") {
    return `Z/${arena.n}, degree ${arena.degree}`;
  }
  let label = `Q_${arena.p}, degree ${arena.degree}`;
  if (arena.integral) label += ", integral";
  if (arena.ramification_denominator === 2) label += ", half-integer orders";
  return label;
}

/** Order strings are small rationals like "3/2" or "-1"; parse for geometry only. */
export function ordValue(ord: string): number {
  const slash = ord.indexOf("/");
  if (slash < 0) return Number(ord);
  return Number(ord.slice(0, slash)) / Number(ord.slice(slash + 1));
}

const SKETCH_W = 260;
const SKETCH_H = 160;
const PAD = 24;

/** Plot the server's polygon verbatim; the hull path is its vertex list as sent. */
export function buildSketch(wire: PolygonWire, degree: number): PolygonSketch {
  const ys = wire.points.map(([, ord]) => ordValue(ord));
  const yLo = Math.min(0, ...ys);
  const yHi = Math.max(1, ...ys);
  const scaleX = (SKETCH_W - 2 * PAD) / Math.max(degree, 1);
  const scaleY = (SKETCH_H - 2 * PAD) / Math.max(yHi - yLo, 1);
  const place = ([index, ord]: [number, string]): SketchPoint => ({
    x: PAD + index * scaleX,
    y: SKETCH_H - PAD - (ordValue(ord) - yLo) * scaleY,
    label: ord,
  });
  const points = wire.points.map(place);
  const vertices = wire.vertices.map(place);
  return {
    width: SKETCH_W,
    height: SKETCH_H,
    points,
    vertices,
    path: vertices.map((v) => `${v.x},${v.y}`).join(" "),
  };
}

function resultPanel(payload: SessionPayload): ResultPanel | null {
  const result = payload.result;
  if (!result) return null;
  const arena = payload.arena;
  let witnesses: string[] = [];
  let detail = "";
  let rootFound: string | null = null;
  if (arena.kind === "cyclic") {
    witnesses = (result.witnesses ?? []).map(String);
    detail = witnesses.length > 0
      ? `roots mod ${arena.n}: ${witnesses.join(", ")}`
      : `no roots mod ${arena.n}`;
  } else {
    const cert = result.certificate;
    if (cert) {
      detail = cert.detail;
      rootFound = cert.exists ? cert.witness : null;
      if (cert.exists && cert.witness === null) rootFound = "(exists)";
    }
  }
  return {
    winner: result.winner,
    headline: `${result.winner} wins`,
    witnesses,
    detail,
    rootFound,
  };
}

export function buildBoardView(payload: SessionPayload): BoardView {
  const humanRole = otherRole(payload.engine_role);
  const lm = payload.legal_moves ?? { open_indices: [], zero_excluded: [] };
  const open = new Set(lm.open_indices);
  const zeroExcluded = new Set(lm.zero_excluded);
  const slots = payload.slots.map((value, index) => ({
    index,
    label: `a_${index}`,
    value,
    open: !payload.finished && open.has(index),
    zeroExcluded: zeroExcluded.has(index),
  }));

  const humanToMove = !payload.finished && payload.to_move === humanRole;
  let banner: string;
  if (payload.finished && payload.result) {
    banner = `game over: ${payload.result.winner} wins`;
  } else if (humanToMove) {
    banner = `your move (you are ${humanRole})`;
  } else {
    banner = `engine (${payload.engine_role}) to move`;
  }

  return {
    arenaLabel: arenaLabel(payload.arena),
    banner,
    humanRole,
    humanToMove,
    finished: payload.finished,
    slots,
    moveLog: payload.move_log.map(
      (m) => `${m.player}: a_${m.index} = ${m.value}`,
    ),
    polygon: payload.polygon
      ? buildSketch(payload.polygon, payload.arena.degree)
      : null,
    result: resultPanel(payload),
  };
}

const ZERO_LITERAL = /^[+-]?0+(\/[0-9]+)?$/;

/**
 * Mirror of legal_moves for pre-filtering; the server remains the authority.
 * Returns a reason string, or null when the move can be submitted.
 */
export function localRejection(
  payload: SessionPayload,
  index: number,
  value: string,
): string | null {
  if (payload.finished || !payload.legal_moves) return "the game is over";
  if (!payload.legal_moves.open_indices.includes(index)) {
    return `a_${index} is already set`;
  }
  const trimmed = value.trim();
  if (trimmed === "") return "enter a value";
  if (
    payload.legal_moves.zero_excluded.includes(index) &&
    ZERO_LITERAL.test(trimmed)
  ) {
    return `a_${index} must be nonzero`;
  }
  return null;
}
