// Generated from the embedded keyword table (quanttm catalog); do not edit by hand.
export interface KeywordEntry {
  name: string;
  keywords: string[];
  principles: string[];
}

export const KEYWORD_TABLE_VERSION = 1;

export const KEYWORD_TABLE: KeywordEntry[] = [
  {
    "name": "DDoS",
    "keywords": [
      "ddos",
      "denial of service"
    ],
    "principles": [
      "Availability"
    ]
  },
  {
    "name": "Ransomware",
    "keywords": [
      "ransomware"
    ],
    "principles": [
      "Confidentiality",
      "Availability"
    ]
  },
  {
    "name": "Phishing",
    "keywords": [
      "phishing",
      "spear phishing"
    ],
    "principles": [
      "Confidentiality"
    ]
  },
  {
    "name": "SQL injection",
    "keywords": [
      "sql injection",
      "sqli"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Cross-site scripting",
    "keywords": [
      "xss",
      "cross site scripting"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Cross-site request forgery",
    "keywords": [
      "csrf",
      "cross site request forgery"
    ],
    "principles": [
      "Integrity"
    ]
  },
  {
    "name": "XML external entity",
    "keywords": [
      "xxe",
      "xml external entity"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Insider threat",
    "keywords": [
      "insider threat",
      "malicious insider"
    ],
    "principles": [
      "Confidentiality",
      "Integrity",
      "Accountability"
    ]
  },
  {
    "name": "Malware",
    "keywords": [
      "malware",
      "virus",
      "trojan",
      "worm"
    ],
    "principles": [
      "Confidentiality",
      "Integrity",
      "Availability"
    ]
  },
  {
    "name": "Botnet",
    "keywords": [
      "botnet"
    ],
    "principles": [
      "Availability"
    ]
  },
  {
    "name": "Data theft",
    "keywords": [
      "data theft",
      "data exfiltration",
      "data leak",
      "data leakage",
      "data breach"
    ],
    "principles": [
      "Confidentiality"
    ]
  },
  {
    "name": "Spoofing",
    "keywords": [
      "spoofing",
      "impersonation"
    ],
    "principles": [
      "Accountability"
    ]
  },
  {
    "name": "Tampering",
    "keywords": [
      "tampering"
    ],
    "principles": [
      "Integrity"
    ]
  },
  {
    "name": "Repudiation",
    "keywords": [
      "repudiation"
    ],
    "principles": [
      "Accountability"
    ]
  },
  {
    "name": "Information disclosure",
    "keywords": [
      "information disclosure"
    ],
    "principles": [
      "Confidentiality"
    ]
  },
  {
    "name": "Privilege escalation",
    "keywords": [
      "privilege escalation",
      "elevation of privilege"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Supply-chain compromise",
    "keywords": [
      "supply chain"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Brute force",
    "keywords": [
      "brute force",
      "credential stuffing",
      "password cracking"
    ],
    "principles": [
      "Confidentiality"
    ]
  },
  {
    "name": "Man-in-the-middle",
    "keywords": [
      "man in the middle",
      "mitm"
    ],
    "principles": [
      "Confidentiality",
      "Integrity"
    ]
  },
  {
    "name": "Insecure deserialization",
    "keywords": [
      "deserialization"
    ],
    "principles": [
      "Integrity",
      "Availability"
    ]
  }
];
