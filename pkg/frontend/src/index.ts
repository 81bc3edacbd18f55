export { EnvClient, type StepOutcome, type TcpTarget, type StdioTarget } from "./client.js";
export { ConnectionFailed, ProtocolError, VersionMismatch } from "./errors.js";
export { IndependentQLearner, seededRandom, type LearnerOptions } from "./learner.js";
export {
  SUPPORTED_PROTOCOL_VERSION,
  type ActionSpace,
  type AgentSpaces,
  type CellRef,
  type JointAction,
  type Observation,
  type ServiceRecord,
  type StepInfo,
} from "./protocol.js";
export { trainOnce, type TrainOptions, type TrainSummary } from "./train.js";
