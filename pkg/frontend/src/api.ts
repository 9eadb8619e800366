// Typed client for the game-service wire API (schema v1).
// The service is authoritative for all chess legality; this module only
// moves JSON around.

export type Color = "white" | "black";
export type Status = "awaiting_human" | "engine_thinking" | "finished";

export interface Breakdown {
  perspective: number;
  material: [number, number];
  ap: [number, number];
  rp: [number, number];
  mobility: [number, number];
  proximity: [number, number];
  mp: number;
  total: number;
}

export interface MoveRecord {
  v: number;
  type: "move";
  ply: number;
  mover: "human" | "engine";
  move: string;
  breakdown?: Breakdown;
}

export interface Termination {
  outcome: string;
  winner: Color | null;
}

export interface Snapshot {
  v: number;
  session: string;
  status: Status;
  human: Color;
  side_to_move: Color;
  ply: number;
  fen: string;
  placement: (string | null)[];
  legal_moves: string[];
  move_log: MoveRecord[];
  last_breakdown: Breakdown | null;
  termination: Termination | null;
}

export interface SessionRow {
  session: string;
  status: Status;
  human: Color;
  ply: number;
}

export interface EngineConfigBody {
  population_size?: number;
  generations?: number;
  depth?: number;
  crossover_prob?: number;
  uniform_level?: number;
  mutation_prob_per_bit?: number;
  inversion_enabled?: boolean;
  elitism_count?: number;
  mix_white?: number;
  mix_black?: number;
  fitness_mode?: "sum" | "last_move";
  rng_seed?: number | null;
  skip_penalty?: number;
  time_budget?: number | null;
}

/** The service surface the game controller drives. */
export interface GameApi {
  createSession(human: Color, config?: EngineConfigBody): Promise<Snapshot>;
  getState(session: string): Promise<Snapshot>;
  postMove(session: string, move: string): Promise<Snapshot>;
  resign(session: string): Promise<Snapshot>;
}

/** Error reported by the service body, carrying its machine-readable kind. */
export class ServiceError extends Error {
  constructor(
    readonly kind: string,
    message: string,
    readonly status: number,
  ) {
    super(message);
    this.name = "ServiceError";
  }
}

async function parseError(res: Response): Promise<ServiceError> {
  let kind = "unknown";
  let message = `service returned ${res.status}`;
  try {
    const body = await res.json();
    if (body && body.error) {
      kind = String(body.error.kind ?? kind);
      message = String(body.error.message ?? message);
    }
  } catch {
    // non-JSON error body; keep the status-line message
  }
  return new ServiceError(kind, message, res.status);
}

export class ApiClient implements GameApi {
  constructor(readonly base: string = "") {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method };
    if (body !== undefined) {
      init.headers = { "content-type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const res = await fetch(this.base + path, init);
    if (!res.ok) throw await parseError(res);
    return (await res.json()) as T;
  }

  createSession(human: Color, config?: EngineConfigBody): Promise<Snapshot> {
    const body: Record<string, unknown> = { human };
    if (config) body.config = config;
    return this.request("POST", "/v1/sessions", body);
  }

  listSessions(): Promise<SessionRow[]> {
    return this.request<{ v: number; sessions: SessionRow[] }>("GET", "/v1/sessions")
      .then((r) => r.sessions);
  }

  getState(session: string): Promise<Snapshot> {
    return this.request("GET", `/v1/sessions/${session}/state`);
  }

  postMove(session: string, move: string): Promise<Snapshot> {
    return this.request("POST", `/v1/sessions/${session}/move`, { move });
  }

  resign(session: string): Promise<Snapshot> {
    return this.request("POST", `/v1/sessions/${session}/resign`);
  }

  getLog(session: string): Promise<MoveRecord[]> {
    return this.request<{ v: number; session: string; log: MoveRecord[] }>(
      "GET", `/v1/sessions/${session}/log`,
    ).then((r) => r.log);
  }
}
