/**
 * Message and descriptor types of the railmarket line-JSON protocol.
 *
 * One JSON object per line; every reply carries `ok`, `kind` and
 * `protocol_version`. A session is one connection (TCP) or one child
 * process (stdio) and owns exactly one environment instance.
 */

export const SUPPORTED_PROTOCOL_VERSION = 1;

export interface CellRef {
  service_id: string;
  origin: string;
  destination: string;
  seat_class: string;
}

export interface ActionSpace {
  type: "continuous" | "discrete";
  dimension: number;
  cells: CellRef[];
  low?: number;
  high?: number;
  levels?: number;
}

export interface ObservationSpace {
  day_range: [number, number];
  fields: Record<string, string[]>;
  services: string[];
  owned_services: string[];
  travel_date_mode: string;
}

export interface AgentSpaces {
  action: ActionSpace;
  observation: ObservationSpace;
}

export interface PriceEntry {
  origin: string;
  destination: string;
  seat_class: string;
  price: number;
}

export interface TicketsEntry {
  origin: string;
  destination: string;
  seat_class: string;
  sold: number;
}

export interface ServiceRecord {
  service_id: string;
  travel_date: number;
  operator: number;
  corridor: number;
  line: number;
  time_slot: number;
  rolling_stock: number;
  prices: PriceEntry[];
  /** Present only for services the observing agent operates. */
  tickets_sold?: TicketsEntry[];
}

export interface Observation {
  agent_id: string;
  day: number;
  services: ServiceRecord[];
}

export type JointAction = Record<string, number[]>;

export interface StepInfo {
  day: number;
  passengers_generated: number;
  passengers_travelled: number;
  passengers_opted_out: number;
  tickets_sold: Record<string, number>;
  per_type: Record<string, { generated: number; travelled: number }>;
}

interface ReplyBase {
  ok: boolean;
  kind: string;
  protocol_version: number;
}

export interface HelloReply extends ReplyBase {
  kind: "hello_reply";
  scenario: string;
  agent_ids: string[];
  action_mode: "continuous" | "discrete";
  horizon_days: number;
  spaces: Record<string, AgentSpaces>;
}

export interface SpacesReply extends ReplyBase {
  kind: "spaces_reply";
  spaces: Record<string, AgentSpaces>;
}

export interface ResetReply extends ReplyBase {
  kind: "reset_reply";
  observations: Record<string, Observation>;
  day: number;
}

export interface StepReply extends ReplyBase {
  kind: "step_reply";
  observations: Record<string, Observation>;
  rewards: Record<string, number>;
  terminal: boolean;
  info: StepInfo;
}

export interface CloseReply extends ReplyBase {
  kind: "close_reply";
}

export interface ErrorReply extends ReplyBase {
  kind: "error";
  ok: false;
  error: { code: string; message: string };
}

export type Reply =
  | HelloReply
  | SpacesReply
  | ResetReply
  | StepReply
  | CloseReply
  | ErrorReply;

export function isErrorReply(reply: Reply): reply is ErrorReply {
  return reply.kind === "error" || !reply.ok;
}
