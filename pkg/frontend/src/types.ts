// Payload shapes mirroring the service's JSON responses. The UI never
// recomputes scores; these values are displayed as received.

export interface CombinedHit {
  doc_id: string;
  title: string;
  qlm_score: number;
  topic_z: number;
  entity_z: number;
  combined: number;
}

export interface SearchResponse {
  query: string;
  role: string | null;
  hits: CombinedHit[];
}

export interface TopicPayload {
  topic_id: string;
  name: string;
  seed_words: string[];
  accepted_words: string[];
  rejected_words: string[];
  has_centroid: boolean;
  correction: number;
  status: 'draft' | 'calibrated';
  version: number;
  calibration?: CalibrationFeedback;
}

export interface CalibrationFeedback {
  mean_relevant_corrected: number;
  mean_irrelevant_corrected: number;
}

export interface BoundaryDoc {
  doc_id: string;
  title: string;
}

export interface RankedTopicDoc {
  doc_id: string;
  title: string;
  topic_score: number;
}

export interface RolePayload {
  role_id: string;
  name: string;
  entity_target: string | null;
  user_topic: string | null;
  lambda1: number;
  lambda2: number;
  version: number;
}

export interface RoleCreate {
  name: string;
  entity_target?: string | null;
  user_topic?: string | null;
  lambda1?: number | null;
  lambda2?: number | null;
}

export interface DocumentPayload {
  doc_id: string;
  title: string;
  body: string;
  entity_distribution: {
    countries: Record<string, number>;
    regions: Record<string, number>;
  } | null;
  topic_distribution: number[] | null;
}

export interface StructureNode {
  node_id: string;
  name: string;
  layer: 'region' | 'country' | 'city_or_person';
  parents: [string, number][];
}

export interface StatsPayload {
  n_docs: number;
  core_vocabulary: number;
  keyword_vocabulary: number;
  n_tokens: number;
  n_phrases: number;
  entities_built: boolean;
  model: {
    topics: number;
    alpha: number;
    beta: number;
    sweeps: number;
    seed: number;
  } | null;
  n_user_topics: number;
  n_roles: number;
}

export interface DocJudgment {
  doc_id: string;
  relevant: boolean;
}
