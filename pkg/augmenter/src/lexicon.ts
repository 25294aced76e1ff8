/**
 * Embedded synonym lexicon for the wordnet method.
 *
 * A trimmed, self-contained table of common English words and near-synonyms.
 * Shipping the table inside the package keeps the augmenter fully offline
 * and byte-for-byte reproducible: an external lexicon file could drift
 * between machines, this one cannot. Keys and values are lowercase; the
 * substitution step restores the original casing pattern.
 */

export const SYNONYMS: Readonly<Record<string, readonly string[]>> = {
  able: ["capable", "competent"],
  angry: ["furious", "irate"],
  answer: ["reply", "response"],
  ask: ["inquire", "query"],
  bad: ["poor", "awful", "terrible"],
  begin: ["start", "commence"],
  big: ["large", "huge", "vast"],
  brave: ["bold", "courageous"],
  break: ["shatter", "fracture"],
  bright: ["luminous", "radiant"],
  build: ["construct", "assemble"],
  buy: ["purchase", "acquire"],
  call: ["phone", "summon"],
  calm: ["serene", "tranquil"],
  car: ["automobile", "vehicle"],
  change: ["alter", "modify"],
  cheap: ["inexpensive", "affordable"],
  choose: ["select", "pick"],
  city: ["town", "metropolis"],
  clean: ["spotless", "tidy"],
  clear: ["evident", "obvious"],
  close: ["shut", "seal"],
  cold: ["chilly", "frigid"],
  come: ["arrive", "approach"],
  cook: ["prepare", "bake"],
  correct: ["accurate", "right"],
  cry: ["weep", "sob"],
  cut: ["slice", "trim"],
  dangerous: ["hazardous", "risky"],
  dark: ["dim", "gloomy"],
  decide: ["determine", "resolve"],
  destroy: ["demolish", "wreck"],
  different: ["distinct", "unlike"],
  difficult: ["hard", "tough"],
  dirty: ["filthy", "grimy"],
  doctor: ["physician", "medic"],
  dog: ["hound", "canine"],
  easy: ["simple", "effortless"],
  eat: ["consume", "devour"],
  empty: ["vacant", "bare"],
  end: ["finish", "conclude"],
  enemy: ["foe", "adversary"],
  fall: ["drop", "tumble"],
  famous: ["renowned", "celebrated"],
  fast: ["quick", "rapid", "swift"],
  fat: ["plump", "stout"],
  fear: ["dread", "terror"],
  fight: ["battle", "combat"],
  find: ["locate", "discover"],
  fix: ["repair", "mend"],
  friend: ["companion", "ally"],
  funny: ["amusing", "comical"],
  get: ["obtain", "receive"],
  give: ["provide", "grant"],
  go: ["travel", "proceed"],
  good: ["fine", "excellent", "great"],
  happy: ["glad", "joyful", "cheerful"],
  hard: ["firm", "solid"],
  hate: ["despise", "loathe"],
  help: ["assist", "aid"],
  hide: ["conceal", "mask"],
  home: ["house", "residence"],
  hot: ["scorching", "boiling"],
  house: ["home", "dwelling"],
  hurt: ["injure", "harm"],
  idea: ["notion", "concept"],
  important: ["significant", "crucial"],
  job: ["work", "occupation"],
  jump: ["leap", "hop"],
  keep: ["retain", "hold"],
  kind: ["gentle", "considerate"],
  know: ["understand", "recognize"],
  large: ["big", "huge"],
  laugh: ["chuckle", "giggle"],
  lazy: ["idle", "sluggish"],
  learn: ["study", "absorb"],
  leave: ["depart", "exit"],
  like: ["enjoy", "favor"],
  little: ["small", "tiny"],
  look: ["gaze", "glance"],
  loud: ["noisy", "deafening"],
  love: ["adore", "cherish"],
  make: ["create", "produce"],
  many: ["numerous", "several"],
  money: ["cash", "currency"],
  move: ["shift", "relocate"],
  near: ["close", "adjacent"],
  new: ["fresh", "recent", "novel"],
  nice: ["pleasant", "agreeable"],
  old: ["ancient", "aged"],
  open: ["unlock", "unseal"],
  place: ["spot", "location"],
  poor: ["needy", "impoverished"],
  pretty: ["lovely", "attractive"],
  problem: ["issue", "difficulty"],
  pull: ["drag", "tug"],
  push: ["shove", "press"],
  quick: ["fast", "speedy"],
  quiet: ["silent", "hushed"],
  real: ["genuine", "actual"],
  rich: ["wealthy", "affluent"],
  right: ["correct", "proper"],
  run: ["sprint", "dash"],
  sad: ["unhappy", "sorrowful"],
  say: ["state", "declare"],
  scared: ["afraid", "frightened"],
  see: ["observe", "view"],
  send: ["dispatch", "transmit"],
  show: ["display", "reveal"],
  sick: ["ill", "unwell"],
  simple: ["plain", "basic"],
  small: ["little", "tiny", "minor"],
  smart: ["clever", "intelligent"],
  start: ["begin", "initiate"],
  stop: ["halt", "cease"],
  story: ["tale", "narrative"],
  strange: ["odd", "peculiar"],
  strong: ["powerful", "sturdy"],
  take: ["grab", "seize"],
  talk: ["speak", "converse"],
  teach: ["instruct", "educate"],
  tell: ["inform", "notify"],
  think: ["believe", "consider"],
  tired: ["weary", "exhausted"],
  true: ["accurate", "genuine"],
  try: ["attempt", "endeavor"],
  ugly: ["unsightly", "hideous"],
  understand: ["comprehend", "grasp"],
  use: ["employ", "utilize"],
  walk: ["stroll", "march"],
  want: ["desire", "wish"],
  warm: ["mild", "toasty"],
  weak: ["feeble", "frail"],
  wet: ["damp", "soaked"],
  win: ["triumph", "prevail"],
  wrong: ["incorrect", "mistaken"],
  young: ["youthful", "juvenile"],
};
