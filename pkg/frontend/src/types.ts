/** Shapes of the service's output JSON. */

export interface AnswerSpan {
  start: number;
  end: number;
  text: string;
}

export interface QANode {
  question: string;
  answer: AnswerSpan;
  score: number;
}

export interface QATree {
  root: QANode;
  children: QANode[];
}

export interface ParagraphResult {
  index: number;
  text: string;
  trees: QATree[];
  orphans: QANode[];
  metadata: Record<string, unknown>;
}

export interface SquashResult {
  document_id: string;
  paragraphs: ParagraphResult[];
  config: Record<string, unknown>;
  version: string;
}

export type JobState = 'pending' | 'running' | 'done' | 'error';

export interface JobStatus {
  job_id: string;
  status: JobState;
  result?: SquashResult;
  error?: string;
}
