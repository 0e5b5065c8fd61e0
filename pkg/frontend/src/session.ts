// Client-side topic-definition state. Everything here is derivable from
// the server's topic record plus in-flight selections, so a page reload
// can always rebuild the session from the API.

import type { BoundaryDoc, TopicPayload } from './types.js';

export type WizardStep = 'seed' | 'words' | 'boundary' | 'calibrated';

export type WordMark = 'accept' | 'reject';

export interface TopicSession {
  topic: TopicPayload | null;
  suggestions: string[];
  wordMarks: Record<string, WordMark>;
  boundary: BoundaryDoc[];
  docMarks: Record<string, boolean>;
}

export function emptySession(): TopicSession {
  return { topic: null, suggestions: [], wordMarks: {}, boundary: [], docMarks: {} };
}

export function sessionFromTopic(topic: TopicPayload): TopicSession {
  return { ...emptySession(), topic };
}

/** Where the wizard stands, derived purely from server-held state. */
export function stepFor(topic: TopicPayload | null): WizardStep {
  if (topic === null) return 'seed';
  if (topic.status === 'calibrated') return 'calibrated';
  if (topic.has_centroid) return 'boundary';
  return 'words';
}

export function markWord(session: TopicSession, word: string, mark: WordMark): TopicSession {
  return { ...session, wordMarks: { ...session.wordMarks, [word]: mark } };
}

export function clearWordMark(session: TopicSession, word: string): TopicSession {
  const wordMarks = { ...session.wordMarks };
  delete wordMarks[word];
  return { ...session, wordMarks };
}

export function pendingWords(session: TopicSession): { accept: string[]; reject: string[] } {
  const accept: string[] = [];
  const reject: string[] = [];
  for (const [word, mark] of Object.entries(session.wordMarks)) {
    (mark === 'accept' ? accept : reject).push(word);
  }
  accept.sort();
  reject.sort();
  return { accept, reject };
}

export function markDocument(
  session: TopicSession,
  docId: string,
  relevant: boolean,
): TopicSession {
  return { ...session, docMarks: { ...session.docMarks, [docId]: relevant } };
}

export function docJudgments(session: TopicSession): { doc_id: string; relevant: boolean }[] {
  return Object.entries(session.docMarks)
    .map(([doc_id, relevant]) => ({ doc_id, relevant }))
    .sort((a, b) => a.doc_id.localeCompare(b.doc_id));
}

/** Calibration needs at least one judgment on each side of the border. */
export function canCalibrate(session: TopicSession): boolean {
  const marks = Object.values(session.docMarks);
  return marks.includes(true) && marks.includes(false);
}
