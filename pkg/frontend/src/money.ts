// Money display and input parsing with integer string math only. The API is
// the single source of monetary truth; this module never aggregates amounts.

const EXPONENT_OVERRIDES: Record<string, number> = {
  BHD: 3, IQD: 3, JOD: 3, KWD: 3, LYD: 3, OMR: 3, TND: 3,
  CLP: 0, ISK: 0, JPY: 0, KRW: 0, VND: 0, XOF: 0, XAF: 0,
};

export function currencyExponent(currency: string): number {
  return EXPONENT_OVERRIDES[currency] ?? 2;
}

/** Render integer minor units as a major-unit decimal string, exactly. */
export function formatMinor(amountMinor: number, currency: string): string {
  const exp = currencyExponent(currency);
  const negative = amountMinor < 0;
  const digits = Math.abs(amountMinor).toString();
  let result: string;
  if (exp === 0) {
    result = digits;
  } else {
    const padded = digits.padStart(exp + 1, "0");
    result = `${padded.slice(0, -exp)}.${padded.slice(-exp)}`;
  }
  return (negative ? "-" : "") + result;
}

export function formatMoney(amountMinor: number, currency: string): string {
  return `${formatMinor(amountMinor, currency)} ${currency}`;
}

/**
 * Parse a user-entered major-unit amount ("1620", "1620.5") into integer
 * minor units. Throws on malformed input or more precision than the
 * currency's minor unit allows.
 */
export function parseMajorToMinor(text: string, currency: string): number {
  const exp = currencyExponent(currency);
  const trimmed = text.trim();
  const match = /^(\d+)(?:\.(\d+))?$/.exec(trimmed);
  if (!match) {
    throw new Error(`not a valid amount: "${text}"`);
  }
  const whole = match[1];
  const fraction = match[2] ?? "";
  if (fraction.length > exp) {
    throw new Error(`${currency} allows at most ${exp} decimal places`);
  }
  const minorDigits = whole + fraction.padEnd(exp, "0");
  const value = Number(minorDigits);
  if (!Number.isSafeInteger(value)) {
    throw new Error(`amount too large: "${text}"`);
  }
  return value;
}
