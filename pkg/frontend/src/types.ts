// Wire shapes of the session service. Values arrive as decimal or fraction
// strings and are rendered verbatim; the client never parses them as numbers
// except to place polygon points on the sketch.

export interface CyclicArena {
  kind: "cyclic";
  n: number;
  degree: number;
  allow_zero_leading: boolean;
}

export interface ValuedArena {
  kind: "valued";
  p: number;
  degree: number;
  allow_zero_leading: boolean;
  ramification_denominator: number;
  integral: boolean;
}

export type Arena = CyclicArena | ValuedArena;

export type Role = "nora" | "wanda";

export interface MoveRecord {
  player: Role;
  index: number;
  value: string;
}

export interface LegalMoves {
  open_indices: number[];
  zero_excluded: number[];
}

/** [index, order]; the order is a decimal or fraction string like "3/2". */
export type PolygonPoint = [number, string];

export interface PolygonWire {
  points: PolygonPoint[];
  vertices: PolygonPoint[];
}

export interface RootCertificate {
  exists: boolean;
  p: number;
  kind: string;
  side: string;
  detail: string;
  level: number | null;
  witness: string | null;
  residue: number | null;
  modulus: string | null;
}

export interface GameResult {
  winner: Role;
  witnesses?: number[];
  certificate?: RootCertificate;
}

export interface SessionPayload {
  id: string;
  arena: Arena;
  first: Role;
  to_move: Role;
  finished: boolean;
  slots: string[];
  move_log: MoveRecord[];
  legal_moves?: LegalMoves; // absent once the board is full
  engine_role: Role;
  strategy: string;
  status: "open" | "finished";
  polygon?: PolygonWire;
  result?: GameResult;
}

export interface NewSessionForm {
  arena: Arena;
  engine_role: Role;
  first: Role;
  strategy?: string;
}

export class ServiceError extends Error {
  constructor(readonly status: number, message: string) {
    super(message);
    this.name = "ServiceError";
  }
}
